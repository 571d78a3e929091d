#include "sharemkt/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sharemkt/search.hpp"

namespace sharemkt {

namespace {

double clearing_tol(const SolverOptions& opts, double demand) {
    return opts.clearing_tol_factor * std::max(demand, 1.0);
}

std::pair<double, double> optimize_revenue_at(const Market& m, double p_c, double p_upper,
                                              double p_potential, const SolverOptions& opts);
std::pair<double, double> optimize_welfare_at(const Market& m, double p_c, double p_upper,
                                              const SolverOptions& opts);

}  // namespace

double revenue(const Market& m, double price, const SolverOptions& opts) {
    EquilibriumState st = solve_equilibrium(m, price, 0.0, opts);
    return price * std::min(st.total_demand, st.total_supply);
}

double welfare_of_state(const Market& m, const EquilibriumState& state) {
    double w = 0.0;
    for (std::size_t i = 0; i < m.num_owners(); ++i) {
        const Action& a = state.owner_actions[i];
        w += m.owners()[i].benefit.value(a.x) - m.cost() * (a.x + a.s);
    }
    // Renters transact only up to the available supply; when demand
    // exceeds it, usage is scaled uniformly and the payment flows cancel
    // against owner income either way.
    double scale = 1.0;
    if (state.total_demand > 0.0 && state.total_supply < state.total_demand) {
        scale = state.total_supply / state.total_demand;
    }
    for (std::size_t k = 0; k < m.num_renters(); ++k) {
        w += m.renters()[k].benefit.value(scale * state.renter_usages[k]);
    }
    return w;
}

double welfare(const Market& m, double price, const SolverOptions& opts) {
    EquilibriumState st = solve_equilibrium(m, price, 0.0, opts);
    return welfare_of_state(m, st);
}

double find_p_upper(const Market& m, const SolverOptions& opts, bool* capped) {
    if (capped) *capped = false;
    const double B = m.deriv_bound();
    const double c = m.cost();
    const int grid_n = 2000;

    if (c == 0.0) {
        // Smallest price with D(p) = 0.
        if (aggregate_demand(m, B) > 0.0) {
            if (capped) *capped = true;
            return B;
        }
        if (aggregate_demand(m, 0.0) == 0.0) return 0.0;
        return bisect_predicate(
            [&](double p) { return aggregate_demand(m, p) <= 0.0; }, 0.0, B, opts.price_tol);
    }

    // Descending scan for the last sign change of p*D(p) - c.
    double hi = B;
    double f_hi = hi * aggregate_demand(m, hi) - c;
    if (f_hi >= 0.0) {
        // Still profitable at the scan origin; no finite root within range.
        if (capped) *capped = true;
        return B;
    }
    for (int j = grid_n - 1; j >= 0; --j) {
        double lo = B * static_cast<double>(j) / grid_n;
        double f_lo = lo * aggregate_demand(m, lo) - c;
        if (f_lo >= 0.0) {
            // Root bracketed in [lo, hi]: pD >= c at lo, < c at hi.
            return bisect_predicate(
                [&](double p) { return p * aggregate_demand(m, p) < c; }, lo, hi,
                opts.price_tol);
        }
        hi = lo;
    }
    throw NoRootError("p*D(p) never reaches the cost " + std::to_string(c) +
                      "; the market is not profitable");
}

double find_p_c(const Market& m, double epsilon, const SolverOptions& opts) {
    double p_upper = find_p_upper(m, opts);

    // Supply equals demand exactly on a whole price stretch above p_c, so
    // the predicate needs slack above solver noise to stay monotone there.
    auto supply_meets_demand = [&](double p) {
        EquilibriumState st = solve_equilibrium(m, p, epsilon, opts);
        double slack = 0.1 * clearing_tol(opts, st.total_demand);
        return st.total_supply >= st.total_demand - slack;
    };

    if (supply_meets_demand(0.0)) return 0.0;
    if (!supply_meets_demand(p_upper)) {
        throw NoClearingError("supply never reaches demand on [0, p_upper]; p_upper=" +
                              std::to_string(p_upper));
    }
    double p_c = bisect_predicate(supply_meets_demand, 0.0, p_upper, opts.price_tol);

    EquilibriumState st = solve_equilibrium(m, p_c, epsilon, opts);
    if (std::abs(st.total_supply - st.total_demand) > clearing_tol(opts, st.total_demand)) {
        throw NoClearingError("clearing residual |S-D|=" +
                              std::to_string(std::abs(st.total_supply - st.total_demand)) +
                              " exceeds tolerance at p_c=" + std::to_string(p_c));
    }
    return p_c;
}

double find_p_potential(const Market& m, const SolverOptions& opts) {
    double p_upper = find_p_upper(m, opts);
    auto potential = [&](double p) { return p * aggregate_demand(m, p); };

    const int grid_n = 1000;
    double best_p = 0.0;
    double best_v = 0.0;
    for (int j = 0; j <= grid_n; ++j) {
        double p = p_upper * static_cast<double>(j) / grid_n;
        double v = potential(p);
        if (v > best_v) {
            best_v = v;
            best_p = p;
        }
    }
    double lo = std::max(0.0, best_p - p_upper / grid_n);
    double hi = std::min(p_upper, best_p + p_upper / grid_n);
    SearchResult refined = golden_max(potential, lo, hi, opts.price_tol, opts.golden_cap);
    return refined.value > best_v ? refined.arg : best_p;
}

std::pair<double, double> optimize_revenue(const Market& m, const SolverOptions& opts) {
    require_valid(m, opts);
    double p_c = find_p_c(m, 0.0, opts);
    double p_upper = find_p_upper(m, opts);
    double p_potential = find_p_potential(m, opts);
    return optimize_revenue_at(m, p_c, p_upper, p_potential, opts);
}

namespace {

std::pair<double, double> optimize_revenue_at(const Market& m, double p_c, double p_upper,
                                              double p_potential, const SolverOptions& opts) {
    double candidate = p_potential >= p_c ? p_potential : p_c;

    // Direct check: above p_c supply covers demand, so realized revenue is
    // p*D(p); maximize it over [p_c, p_upper] and compare.
    auto potential = [&](double p) { return p * aggregate_demand(m, p); };
    const int grid_n = 200;
    double best_p = p_c;
    double best_v = potential(p_c);
    for (int j = 0; j <= grid_n; ++j) {
        double p = p_c + (p_upper - p_c) * static_cast<double>(j) / grid_n;
        double v = potential(p);
        if (v > best_v) {
            best_v = v;
            best_p = p;
        }
    }
    double span = (p_upper - p_c) / grid_n;
    SearchResult refined =
        golden_max(potential, std::max(p_c, best_p - span), std::min(p_upper, best_p + span),
                   opts.price_tol, opts.golden_cap);
    if (refined.value > best_v) {
        best_v = refined.value;
        best_p = refined.arg;
    }

    double cand_v = potential(candidate);
    bool price_agree = std::abs(best_p - candidate) <= 10.0 * opts.price_tol * std::max(1.0, candidate);
    bool value_agree = best_v - cand_v <= 1e-9 * std::max(1.0, std::abs(cand_v)) + 1e-12;
    if (!price_agree && !value_agree) {
        throw CrossCheckMismatchError(
            "revenue optimum mismatch: structural p_r=" + std::to_string(candidate) +
            " (R=" + std::to_string(cand_v) + ") vs direct " + std::to_string(best_p) +
            " (R=" + std::to_string(best_v) + ")");
    }
    return {candidate, revenue(m, candidate, opts)};
}

}  // namespace

std::pair<double, double> optimize_welfare(const Market& m, const SolverOptions& opts) {
    require_valid(m, opts);
    double p_c = find_p_c(m, 0.0, opts);
    double p_upper = find_p_upper(m, opts);
    return optimize_welfare_at(m, p_c, p_upper, opts);
}

namespace {

std::pair<double, double> optimize_welfare_at(const Market& m, double p_c, double p_upper,
                                              const SolverOptions& opts) {
    double w_c = welfare(m, p_c, opts);

    // Regression tripwire: no swept price may beat the clearing price.
    const int grid_n = 50;
    double best_p = p_c;
    double best_w = w_c;
    for (int j = 0; j <= grid_n; ++j) {
        double p = p_upper * static_cast<double>(j) / grid_n;
        double w = welfare(m, p, opts);
        if (w > best_w) {
            best_w = w;
            best_p = p;
        }
    }
    if (best_w > w_c + 1e-4 * std::abs(w_c)) {
        // Refine before declaring a mismatch; a coarse-grid spike would be
        // a solver bug, not a real welfare optimum.
        double span = p_upper / grid_n;
        SearchResult refined = golden_max([&](double p) { return welfare(m, p, opts); },
                                          std::max(0.0, best_p - span),
                                          std::min(p_upper, best_p + span), opts.price_tol,
                                          40);
        best_w = std::max(best_w, refined.value);
        if (best_w > w_c + 1e-4 * std::abs(w_c)) {
            throw CrossCheckMismatchError(
                "welfare sweep found W=" + std::to_string(best_w) + " at p=" +
                std::to_string(best_p) + ", above W(p_c)=" + std::to_string(w_c));
        }
    }
    return {p_c, w_c};
}

}  // namespace

GapBound gap_bounds_from_states(const Market& m, const EquilibriumState& sw_state,
                                const EquilibriumState& r_state, const SolverOptions& opts) {
    GapBound gb;
    gb.actual_gap = welfare_of_state(m, sw_state) - welfare_of_state(m, r_state);

    const double p_r = r_state.price;
    const double D_sw = sw_state.total_demand;
    const double D_r = r_state.total_demand;
    const double S_sw = sw_state.total_supply;
    const double S_r = r_state.total_supply;
    const double ratio_r = S_r > 0.0 ? D_r / S_r : 0.0;

    double increased = 0.0;
    bool all_increased = true;
    for (std::size_t i = 0; i < m.num_owners(); ++i) {
        double ds = r_state.owner_actions[i].s - sw_state.owner_actions[i].s;
        if (ds >= 0.0) {
            increased += ds;
        } else if (ds < -opts.action_tol) {
            all_increased = false;
        }
    }

    gb.bound_general = p_r * (D_sw - D_r) + p_r * ratio_r * increased;
    gb.special_valid = all_increased;
    gb.bound_special = S_r > 0.0 ? p_r * (D_sw - D_r * S_sw / S_r) : p_r * D_sw;
    gb.bound_interpretable = p_r * (D_sw - D_r) + p_r * ratio_r * (S_r - S_sw);
    return gb;
}

GapBound welfare_gap_bounds(const Market& m, double p_sw, double p_r,
                            const SolverOptions& opts) {
    EquilibriumState sw_state = solve_equilibrium(m, p_sw, 0.0, opts);
    EquilibriumState r_state = solve_equilibrium(m, p_r, 0.0, opts);
    return gap_bounds_from_states(m, sw_state, r_state, opts);
}

PriceAnalysis analyze_structural_prices(const Market& m, double epsilon,
                                        const SolverOptions& opts) {
    PriceAnalysis pa;
    pa.p_upper = find_p_upper(m, opts, &pa.p_upper_capped);
    pa.p_c = find_p_c(m, epsilon, opts);
    return pa;
}

PriceAnalysis analyze_prices(const Market& m, const SolverOptions& opts) {
    require_valid(m, opts);
    PriceAnalysis pa;
    pa.p_upper = find_p_upper(m, opts, &pa.p_upper_capped);
    pa.p_c = find_p_c(m, 0.0, opts);
    pa.p_potential = find_p_potential(m, opts);
    auto [p_r, r_val] = optimize_revenue_at(m, pa.p_c, pa.p_upper, pa.p_potential, opts);
    pa.p_r = p_r;
    pa.revenue_at_p_r = r_val;
    auto [p_sw, w_val] = optimize_welfare_at(m, pa.p_c, pa.p_upper, opts);
    pa.p_sw = p_sw;
    pa.welfare_at_p_sw = w_val;
    pa.welfare_at_p_r = welfare(m, pa.p_r, opts);
    return pa;
}

}  // namespace sharemkt
