#include "sharemkt/search.hpp"

#include <cmath>

namespace sharemkt {

SearchResult golden_max(const std::function<double(double)>& f, double lo, double hi,
                        double tol, int max_iter) {
    if (hi <= lo) return {lo, f(lo)};
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;

    double a = lo;
    double b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (fc >= fd) {  // >= keeps ties collapsing leftward
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    // Pick the best of the shrunken bracket, preferring the smaller argument.
    double fa = f(a);
    double fb = f(b);
    SearchResult best{a, fa};
    if (fc > best.value) best = {c, fc};
    if (fd > best.value) best = {d, fd};
    if (fb > best.value) best = {b, fb};
    return best;
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double tol, int max_iter) {
    double a = lo;
    double b = hi;
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        double mid = 0.5 * (a + b);
        if (pred(mid)) {
            b = mid;
        } else {
            a = mid;
        }
    }
    return b;
}

}  // namespace sharemkt
