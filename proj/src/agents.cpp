#include "sharemkt/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sharemkt/search.hpp"

namespace sharemkt {

double matching_factor(double total_demand, double others_supply, double s) {
    double supply = others_supply + s;
    if (supply <= 0.0) {
        return total_demand > 0.0 ? 1.0 : 0.0;
    }
    return std::min(total_demand / supply, 1.0);
}

double owner_utility(const BenefitFunction& f, const OwnerEnvironment& env, double x, double s) {
    double match = matching_factor(env.total_demand, env.others_supply, s);
    return f.value(x) + env.price * (match + env.epsilon) * s - env.cost * (x + s);
}

double renter_demand(const BenefitFunction& g, double price) {
    if (!(price >= 0.0)) throw std::domain_error("price must be nonnegative");
    return g.argmax_net(price);
}

double aggregate_demand(const Market& m, double price) {
    if (!(price >= 0.0)) throw std::domain_error("price must be nonnegative");
    double total = 0.0;
    for (const auto& [rep, count] : m.renter_group_reps()) {
        total += static_cast<double>(count) * renter_demand(m.renters()[rep].benefit, price);
    }
    return total;
}

Action owner_best_response(const BenefitFunction& f, const OwnerEnvironment& env,
                           const SolverOptions& opts) {
    if (!(env.price >= 0.0 && env.cost >= 0.0 && env.epsilon >= 0.0 &&
          env.total_demand >= 0.0 && env.others_supply >= 0.0) ||
        !std::isfinite(env.price + env.cost + env.epsilon + env.total_demand +
                       env.others_supply)) {
        throw std::domain_error("owner environment fields must be finite and nonnegative");
    }

    const double xhat = f.argmax_net(env.cost);

    auto reduced = [&](double s) {
        double x = std::min(xhat, 1.0 - s);
        return owner_utility(f, env, x, s);
    };

    // Kinks: x starts tracking the budget at s = 1 - xhat; the matching
    // factor saturates at s = D - S_others.
    std::vector<double> pts{0.0, 1.0};
    double k1 = 1.0 - xhat;
    if (k1 > 0.0 && k1 < 1.0) pts.push_back(k1);
    double k2 = env.total_demand - env.others_supply;
    if (k2 > 0.0 && k2 < 1.0) pts.push_back(k2);
    std::sort(pts.begin(), pts.end());

    // Evaluate segment endpoints and segment interiors in ascending s;
    // strict improvement keeps the smallest maximizing s.
    double best_s = 0.0;
    double best_v = reduced(0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        SearchResult in =
            golden_max(reduced, pts[i - 1], pts[i], opts.action_tol, opts.golden_cap);
        if (in.value > best_v) {
            best_v = in.value;
            best_s = in.arg;
        }
        double ve = reduced(pts[i]);
        if (ve > best_v) {
            best_v = ve;
            best_s = pts[i];
        }
    }
    if (!std::isfinite(best_v)) {
        throw std::runtime_error("owner best response: objective is not finite");
    }
    return Action{std::min(xhat, 1.0 - best_s), best_s};
}

double gradient_residual(const BenefitFunction& f, const OwnerEnvironment& env, double x,
                         double s) {
    if (x < -1e-12 || s < -1e-12 || x + s > 1.0 + 1e-9) {
        throw std::domain_error("(x, s) must lie in the action simplex");
    }
    const double p = env.price;
    const double D = env.total_demand;
    const double S = env.others_supply + s;
    const double bonus = p * env.epsilon;
    const double clear_tol = 1e-6 * std::max(1.0, D);

    // One-sided marginal revenue of sharing. In the oversupplied region
    // d/ds [p D s / (S_others + s)] = p D S_others / S^2; while supply is
    // short the marginal unit earns p.
    double dq_up;    // marginal gain when s increases (tested against left f')
    double dq_down;  // marginal loss when s decreases (tested against right f')
    if (S < D - clear_tol) {
        dq_up = dq_down = p;
    } else if (S > D + clear_tol) {
        double v = (S > 0.0) ? p * D * env.others_supply / (S * S) : 0.0;
        dq_up = dq_down = v;
    } else {
        // Clearing: increasing s moves into oversupply, decreasing s keeps
        // the marginal unit fully matched.
        dq_up = (S > 0.0) ? p * D * env.others_supply / (S * S) : p;
        dq_down = p;
    }

    double residual = 0.0;
    // Swapping s -> x pays if f' right exceeds what the marginal shared
    // unit earns; requires s > 0 to take from.
    if (s > 1e-12 && x < 1.0 - 1e-12) {
        double fplus = f.deriv(x, DerivSide::Right);
        residual = std::max(residual, fplus - (dq_down + bonus));
    }
    // Swapping x -> s pays if the marginal shared unit earns more than f'
    // left; requires x > 0 to take from.
    if (x > 1e-12 && s < 1.0 - 1e-12) {
        double fminus = f.deriv(x, DerivSide::Left);
        residual = std::max(residual, (dq_up + bonus) - fminus);
    }
    return residual;
}

}  // namespace sharemkt
