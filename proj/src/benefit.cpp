#include "sharemkt/benefit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sharemkt {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_unit_range(double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("usage must lie in [0,1], got " + std::to_string(u));
    }
}

void check_nonnegative(double u) {
    if (!(u >= 0.0)) {
        throw std::domain_error("usage must be nonnegative, got " + std::to_string(u));
    }
}

}  // namespace

BenefitFunction BenefitFunction::quadratic(double a, double b) {
    require(std::isfinite(a) && a > 0.0, "quadratic: curvature a must be > 0");
    require(std::isfinite(b) && b >= 0.0, "quadratic: slope b must be >= 0");
    return BenefitFunction(Quadratic{a, b});
}

BenefitFunction BenefitFunction::linear(double alpha) {
    require(std::isfinite(alpha) && alpha >= 0.0, "linear: slope alpha must be >= 0");
    return BenefitFunction(Linear{alpha});
}

BenefitFunction BenefitFunction::entropy(double alpha, double beta, double n) {
    require(std::isfinite(alpha) && alpha > 0.0, "entropy: scale alpha must be > 0");
    require(std::isfinite(beta) && beta > 0.0, "entropy: rate beta must be > 0");
    require(std::isfinite(n) && n > 0.0, "entropy: population n must be > 0");
    return BenefitFunction(Entropy{alpha, beta, n});
}

BenefitFunction BenefitFunction::tabulated(std::vector<std::pair<double, double>> points) {
    require(points.size() >= 2, "tabulated: need at least two breakpoints");
    require(points.front().first == 0.0 && points.front().second == 0.0,
            "tabulated: first breakpoint must be (0,0)");
    require(points.back().first == 1.0, "tabulated: last breakpoint must have u = 1");
    for (std::size_t i = 1; i < points.size(); ++i) {
        require(points[i].first > points[i - 1].first,
                "tabulated: breakpoints must be strictly increasing in u");
        require(std::isfinite(points[i].second), "tabulated: values must be finite");
    }
    // Concavity: segment slopes must be nonincreasing.
    double prev_slope = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < points.size(); ++i) {
        double slope = (points[i].second - points[i - 1].second) /
                       (points[i].first - points[i - 1].first);
        require(slope <= prev_slope + 1e-12, "tabulated: breakpoints are not concave");
        prev_slope = slope;
    }
    return BenefitFunction(Tabulated{std::move(points)});
}

double BenefitFunction::value(double u) const {
    // Entropy models calibrated usage frequencies and extends past 1; the
    // other variants live on the normalized [0,1] range.
    if (const auto* e = std::get_if<Entropy>(&spec_)) {
        check_nonnegative(u);
        if (u == 0.0) return 0.0;
        return u * (1.0 + std::log(e->alpha / e->n) - std::log(u)) / e->beta;
    }
    check_unit_range(u);
    if (const auto* q = std::get_if<Quadratic>(&spec_)) {
        return -q->a * u * u + q->b * u;
    }
    if (const auto* l = std::get_if<Linear>(&spec_)) {
        return l->alpha * u;
    }
    const auto& pts = std::get<Tabulated>(spec_).points;
    auto it = std::upper_bound(pts.begin(), pts.end(), u,
                               [](double x, const auto& p) { return x < p.first; });
    if (it == pts.begin()) return pts.front().second;
    if (it == pts.end()) return pts.back().second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double t = (u - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

double BenefitFunction::deriv(double u, DerivSide side) const {
    if (const auto* e = std::get_if<Entropy>(&spec_)) {
        check_nonnegative(u);
        if (side == DerivSide::Left && u <= 0.0) {
            throw std::domain_error("left derivative undefined at u = 0");
        }
        if (u == 0.0) return std::numeric_limits<double>::infinity();
        return (std::log(e->alpha / e->n) - std::log(u)) / e->beta;
    }
    check_unit_range(u);
    if (side == DerivSide::Left && u <= 0.0) {
        throw std::domain_error("left derivative undefined at u = 0");
    }
    if (side == DerivSide::Right && u >= 1.0) {
        throw std::domain_error("right derivative undefined at u = 1");
    }
    if (const auto* q = std::get_if<Quadratic>(&spec_)) {
        return q->b - 2.0 * q->a * u;
    }
    if (const auto* l = std::get_if<Linear>(&spec_)) {
        return l->alpha;
    }
    const auto& pts = std::get<Tabulated>(spec_).points;
    // Slope of the segment on the requested side of u.
    if (side == DerivSide::Left) {
        auto it = std::lower_bound(pts.begin(), pts.end(), u,
                                   [](const auto& p, double x) { return p.first < x; });
        // it points at the first breakpoint with u_i >= u; segment (it-1, it)
        // covers (u - eps, u].
        if (it == pts.begin()) ++it;
        if (it == pts.end()) --it;
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        return (hi.second - lo.second) / (hi.first - lo.first);
    }
    auto it = std::upper_bound(pts.begin(), pts.end(), u,
                               [](double x, const auto& p) { return x < p.first; });
    // it points at the first breakpoint with u_i > u; segment (it-1, it)
    // covers [u, u + eps).
    if (it == pts.begin()) ++it;
    if (it == pts.end()) --it;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return (hi.second - lo.second) / (hi.first - lo.first);
}

double BenefitFunction::deriv_at_zero(double bound, bool* capped) const {
    if (capped) *capped = false;
    if (std::holds_alternative<Entropy>(spec_)) {
        if (capped) *capped = true;
        return bound;
    }
    return deriv(0.0, DerivSide::Right);
}

bool BenefitFunction::deriv_at_zero_finite() const {
    return !std::holds_alternative<Entropy>(spec_);
}

double BenefitFunction::deriv_at_one() const { return deriv(1.0, DerivSide::Left); }

double BenefitFunction::argmax_net_uncapped(double price) const {
    if (const auto* e = std::get_if<Entropy>(&spec_)) {
        return (e->alpha / e->n) * std::exp(-e->beta * price);
    }
    return argmax_net(price);
}

double BenefitFunction::usage_cap() const {
    if (const auto* e = std::get_if<Entropy>(&spec_)) {
        return e->alpha / e->n;
    }
    return 1.0;
}

double BenefitFunction::argmax_net(double price) const {
    if (const auto* q = std::get_if<Quadratic>(&spec_)) {
        return std::clamp((q->b - price) / (2.0 * q->a), 0.0, 1.0);
    }
    if (const auto* l = std::get_if<Linear>(&spec_)) {
        return l->alpha > price ? 1.0 : 0.0;  // tie -> non-participation
    }
    if (const auto* e = std::get_if<Entropy>(&spec_)) {
        return std::clamp((e->alpha / e->n) * std::exp(-e->beta * price), 0.0, 1.0);
    }
    const auto& pts = std::get<Tabulated>(spec_).points;
    // Piecewise-linear net objective attains its maximum at a breakpoint;
    // strict improvement keeps the smallest maximizer.
    double best_u = pts.front().first;
    double best_v = pts.front().second - price * pts.front().first;
    for (const auto& p : pts) {
        double v = p.second - price * p.first;
        if (v > best_v) {
            best_v = v;
            best_u = p.first;
        }
    }
    return best_u;
}

bool BenefitFunction::operator==(const BenefitFunction& other) const {
    if (spec_.index() != other.spec_.index()) return false;
    if (const auto* q = std::get_if<Quadratic>(&spec_)) {
        const auto* o = std::get_if<Quadratic>(&other.spec_);
        return q->a == o->a && q->b == o->b;
    }
    if (const auto* l = std::get_if<Linear>(&spec_)) {
        return l->alpha == std::get_if<Linear>(&other.spec_)->alpha;
    }
    if (const auto* e = std::get_if<Entropy>(&spec_)) {
        const auto* o = std::get_if<Entropy>(&other.spec_);
        return e->alpha == o->alpha && e->beta == o->beta && e->n == o->n;
    }
    return std::get<Tabulated>(spec_).points == std::get<Tabulated>(other.spec_).points;
}

}  // namespace sharemkt
