#include "sharemkt/calibration.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sharemkt/errors.hpp"

namespace sharemkt {

DemandFit fit_exponential_demand(const std::vector<TransactionRecord>& records,
                                 double p_offset, bool add_one_smoothing) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> ws;
    std::size_t dropped = 0;
    for (const auto& r : records) {
        if (!std::isfinite(r.price) || !std::isfinite(r.count) || r.count < 0.0) {
            throw std::invalid_argument("transaction records must have finite price and count >= 0");
        }
        double count = add_one_smoothing ? r.count + 1.0 : r.count;
        if (count <= 0.0) {
            ++dropped;
            continue;
        }
        xs.push_back(r.price - p_offset);
        ys.push_back(std::log(count));
        ws.push_back(count);
    }
    std::set<double> distinct(xs.begin(), xs.end());
    if (distinct.size() < 2) {
        throw InsufficientDataError("need at least two distinct prices with positive counts, got " +
                                    std::to_string(distinct.size()));
    }

    double W = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        W += ws[j];
        mx += ws[j] * xs[j];
        my += ws[j] * ys[j];
    }
    mx /= W;
    my /= W;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double dx = xs[j] - mx;
        double dy = ys[j] - my;
        sxx += ws[j] * dx * dx;
        sxy += ws[j] * dx * dy;
        syy += ws[j] * dy * dy;
    }
    double slope = sxy / sxx;  // ln D = A + slope * p
    double intercept = my - slope * mx;

    DemandFit fit;
    fit.beta = -slope;
    fit.alpha = std::exp(intercept);
    fit.p_offset = p_offset;
    fit.rows_used = xs.size();
    fit.rows_dropped = dropped;
    double ss_res = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double e = ys[j] - (intercept + slope * xs[j]);
        ss_res += ws[j] * e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;

    if (!(fit.beta > 0.0)) {
        throw DegenerateFitError("fitted demand is nondecreasing (beta = " +
                                 std::to_string(fit.beta) + ")");
    }
    return fit;
}

std::vector<Renter> build_renters_from_fit(const DemandFit& fit, std::size_t n) {
    if (n < 1) throw std::invalid_argument("renter count must be >= 1");
    if (!(fit.alpha > 0.0 && fit.beta > 0.0)) {
        throw std::invalid_argument("fit parameters must be positive");
    }
    std::vector<Renter> renters;
    renters.reserve(n);
    BenefitFunction g =
        BenefitFunction::entropy(fit.alpha, fit.beta, static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) renters.push_back(Renter{g});
    return renters;
}

double implied_demand(const DemandFit& fit, double price) {
    if (!(price >= 0.0)) throw std::domain_error("offset-relative price must be >= 0");
    return fit.alpha * std::exp(-fit.beta * price);
}

std::vector<TransactionRecord> load_transactions_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open transactions file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty transactions file: " + path);
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "price,count") {
        throw std::invalid_argument("expected header 'price,count', got '" + line + "'");
    }
    std::vector<TransactionRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            throw std::invalid_argument("malformed CSV row " + std::to_string(lineno));
        }
        records.push_back({std::stod(a), std::stod(b)});
    }
    return records;
}

}  // namespace sharemkt
