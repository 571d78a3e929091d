#pragma once

#include <string>
#include <vector>

#include "sharemkt/market.hpp"

namespace sharemkt {

/// Number of transactions observed at one price level.
struct TransactionRecord {
    double price = 0.0;
    double count = 0.0;
};

/// Exponential aggregate-demand fit D(p) = alpha * exp(-beta * p), prices
/// measured relative to `p_offset` (minimum-charge reset).
struct DemandFit {
    double alpha = 0.0;
    double beta = 0.0;
    double r2 = 0.0;  // on the log scale, weighted
    double p_offset = 0.0;
    std::size_t rows_used = 0;
    std::size_t rows_dropped = 0;  // zero-count rows excluded from the fit
};

/// Weighted log-linear least squares on (p - p_offset, ln count), weights =
/// counts. Zero-count rows are dropped (or kept via +1 smoothing).
/// Throws InsufficientDataError with fewer than two distinct usable prices
/// and DegenerateFitError when the fitted demand fails to decrease.
DemandFit fit_exponential_demand(const std::vector<TransactionRecord>& records,
                                 double p_offset = 0.0, bool add_one_smoothing = false);

/// n identical renters whose aggregate demand reproduces the fit wherever
/// individual usage is interior.
std::vector<Renter> build_renters_from_fit(const DemandFit& fit, std::size_t n);

/// alpha * exp(-beta * p) for offset-relative p >= 0.
double implied_demand(const DemandFit& fit, double price);

/// Reads `price,count` CSV (header required).
std::vector<TransactionRecord> load_transactions_csv(const std::string& path);

}  // namespace sharemkt
