#pragma once

#include <functional>
#include <utility>

namespace sharemkt {

/// Result of a 1-D maximization: argument and objective value.
struct SearchResult {
    double arg = 0.0;
    double value = 0.0;
};

/// Golden-section maximization of a unimodal (e.g. concave) function on
/// [lo, hi]. Ties shrink toward lo, so flat stretches resolve to the
/// smallest maximizer up to `tol`.
SearchResult golden_max(const std::function<double(double)>& f, double lo, double hi,
                        double tol, int max_iter);

/// Smallest point in [lo, hi] where `pred` flips to true, assuming pred is
/// false at lo, true at hi, and monotone. Returns hi-side bracket endpoint.
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double tol, int max_iter = 200);

}  // namespace sharemkt
