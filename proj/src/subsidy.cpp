#include "sharemkt/subsidy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sharemkt/pricing.hpp"
#include "sharemkt/search.hpp"

namespace sharemkt {

std::string to_string(SubsidyRegime r) {
    switch (r) {
        case SubsidyRegime::Small: return "small";
        case SubsidyRegime::Medium: return "medium";
        case SubsidyRegime::Large: return "large";
    }
    return "unknown";
}

std::string to_string(SubsidyCostModel c) {
    return c == SubsidyCostModel::PerUnitEpsilon ? "per_unit_epsilon" : "per_unit_price_epsilon";
}

SubsidyClassification classify_subsidy_regime(const Market& m, const EquilibriumState& state,
                                              const SolverOptions& opts) {
    const double tol = 1e-6;
    SubsidyClassification out;

    bool all_full_share = true;
    bool all_saturated = true;
    for (const Action& a : state.owner_actions) {
        if (a.s < 1.0 - tol) all_full_share = false;
        if (a.x + a.s < 1.0 - tol) all_saturated = false;
    }
    if (all_full_share) {
        out.regime = SubsidyRegime::Large;
    } else if (all_saturated) {
        out.regime = SubsidyRegime::Medium;
    } else {
        out.regime = SubsidyRegime::Small;
    }

    // Threshold record against the eps=0 baseline at the same price.
    EquilibriumState base = solve_equilibrium(m, state.price, 0.0, opts);
    const double D = state.total_demand;
    const double S0 = base.total_supply;
    const double p = state.price;
    out.small_threshold.resize(m.num_owners(), std::numeric_limits<double>::quiet_NaN());
    out.large_threshold.resize(m.num_owners(), std::numeric_limits<double>::quiet_NaN());
    bool small_by_threshold = S0 > 0.0;
    bool large_by_threshold = p > 0.0;
    for (std::size_t i = 0; i < m.num_owners(); ++i) {
        if (S0 > 0.0) {
            double s0 = base.owner_actions[i].s;
            out.small_threshold[i] = (D / S0) * (1.0 - s0 / S0);
            if (state.epsilon > out.small_threshold[i]) small_by_threshold = false;
        } else {
            small_by_threshold = false;
        }
        if (p > 0.0) {
            double s_others = state.total_supply - state.owner_actions[i].s;
            bool capped = false;
            double f0 = m.owners()[i].benefit.deriv_at_zero(m.deriv_bound(), &capped);
            out.large_threshold[i] =
                (f0 - p * D * s_others / ((s_others + 1.0) * (s_others + 1.0))) / p;
            if (state.epsilon < out.large_threshold[i]) large_by_threshold = false;
        } else {
            large_by_threshold = false;
        }
    }
    SubsidyRegime by_threshold = small_by_threshold ? SubsidyRegime::Small
                                 : large_by_threshold ? SubsidyRegime::Large
                                                      : SubsidyRegime::Medium;
    out.thresholds_agree = by_threshold == out.regime;
    return out;
}

SupplyBound supply_bound_F(const Market& m, double price, double epsilon,
                           const SolverOptions& opts) {
    SupplyBound out;
    out.per_owner.resize(m.num_owners(), std::numeric_limits<double>::quiet_NaN());

    EquilibriumState base = solve_equilibrium(m, price, 0.0, opts);
    const double D = base.total_demand;
    const double S0 = base.total_supply;
    if (S0 <= 0.0) return out;

    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < m.num_owners(); ++i) {
        double s0 = base.owner_actions[i].s;
        double denom = (D / S0) * (1.0 - s0 / S0) - epsilon;
        if (epsilon > (D / S0) * (1.0 - s0 / S0) || denom <= 0.0) continue;
        double M = D * (1.0 - 2.0 * s0 / S0);
        double F = (D + std::sqrt(M * M + 4.0 * D * s0 * epsilon)) / (2.0 * denom);
        out.per_owner[i] = F;
        best = std::min(best, F);
        any = true;
    }
    if (any) out.min_applicable = best;
    return out;
}

double net_revenue(const Market& m, double price, double epsilon, SubsidyCostModel model,
                   const SolverOptions& opts) {
    EquilibriumState st = solve_equilibrium(m, price, epsilon, opts);
    double traded = price * std::min(st.total_demand, st.total_supply);
    double bill = model == SubsidyCostModel::PerUnitEpsilon
                      ? epsilon * st.total_supply
                      : price * epsilon * st.total_supply;
    return traded - bill;
}

SubsidyOutcome optimize_subsidy(const Market& m, SubsidyCostModel model,
                                const SolverOptions& opts) {
    require_valid(m, opts);
    SubsidyOutcome out;
    out.cost_model = model;

    double p_c0 = find_p_c(m, 0.0, opts);
    double p_potential = find_p_potential(m, opts);
    double p_r0 = p_potential >= p_c0 ? p_potential : p_c0;
    out.baseline_revenue = revenue(m, p_r0, opts);

    auto price_for = [&](double eps) {
        double pc = find_p_c(m, eps, opts);
        return std::max(p_potential, pc);
    };
    auto objective = [&](double eps) { return net_revenue(m, price_for(eps), eps, model, opts); };

    double eps_star = 0.0;
    double v_star = out.baseline_revenue;

    if (p_potential < p_c0) {
        // Split the search where the clearing price crosses p_potential;
        // the objective is non-smooth there.
        double eps_hi = opts.epsilon_max;
        std::vector<std::pair<double, double>> segments;
        if (find_p_c(m, eps_hi, opts) <= p_potential) {
            double crossover = bisect_predicate(
                [&](double eps) { return find_p_c(m, eps, opts) <= p_potential; }, 0.0, eps_hi,
                opts.epsilon_tol);
            segments.push_back({0.0, crossover});
            segments.push_back({crossover, eps_hi});
        } else {
            segments.push_back({0.0, eps_hi});
        }
        for (auto [lo, hi] : segments) {
            SearchResult res = golden_max(objective, lo, hi, opts.epsilon_tol, opts.golden_cap);
            if (res.value > v_star) {
                v_star = res.value;
                eps_star = res.arg;
            }
        }
        // Local refinement around the winner.
        if (eps_star > 0.0) {
            double lo = std::max(0.0, eps_star - 10.0 * opts.epsilon_tol);
            double hi = std::min(opts.epsilon_max, eps_star + 10.0 * opts.epsilon_tol);
            SearchResult res =
                golden_max(objective, lo, hi, opts.epsilon_tol * 1e-2, opts.golden_cap);
            if (res.value > v_star) {
                v_star = res.value;
                eps_star = res.arg;
            }
        }
    }

    out.epsilon = eps_star;
    out.price = eps_star > 0.0 ? price_for(eps_star) : p_r0;
    out.state = solve_equilibrium(m, out.price, eps_star, opts);
    out.net_revenue = net_revenue(m, out.price, eps_star, model, opts);
    SubsidyCostModel alt = model == SubsidyCostModel::PerUnitEpsilon
                               ? SubsidyCostModel::PerUnitPriceEpsilon
                               : SubsidyCostModel::PerUnitEpsilon;
    out.net_revenue_alt = net_revenue(m, out.price, eps_star, alt, opts);
    out.regime = classify_subsidy_regime(m, out.state, opts).regime;
    SupplyBound fb = supply_bound_F(m, out.price, eps_star, opts);
    out.F_bound = fb.min_applicable;
    out.improved = out.net_revenue > out.baseline_revenue;
    return out;
}

}  // namespace sharemkt
