#pragma once

#include <optional>

#include "sharemkt/equilibrium.hpp"
#include "sharemkt/market.hpp"
#include "sharemkt/options.hpp"

namespace sharemkt {

/// Structural prices of a market plus the objective values at the optima.
struct PriceAnalysis {
    double p_c = 0.0;          // lowest market-clearing price
    double p_upper = 0.0;      // supply shutdown threshold
    bool p_upper_capped = false;  // no finite shutdown price; capped at deriv bound
    double p_potential = 0.0;  // argmax of p * D(p)
    double p_r = 0.0;          // revenue-optimal price
    double p_sw = 0.0;         // welfare-optimal price
    double revenue_at_p_r = 0.0;
    double welfare_at_p_sw = 0.0;
    double welfare_at_p_r = 0.0;
};

/// Welfare-gap bounds between the welfare- and revenue-optimal outcomes.
struct GapBound {
    double actual_gap = 0.0;
    double bound_general = 0.0;        // per-owner supply-difference form
    double bound_special = 0.0;        // aggregate form, needs s_i^r >= s_i^sw for all i
    bool special_valid = false;
    double bound_interpretable = 0.0;  // renter-loss + owner-loss split
};

/// Platform revenue proxy p * min{D(p), S(p)} at the solved equilibrium.
double revenue(const Market& m, double price, const SolverOptions& opts = {});

/// Aggregate welfare at the solved equilibrium. Above the clearing price
/// payments cancel; below it renters are rationed by uniform scaling of
/// usage to the available supply.
double welfare(const Market& m, double price, const SolverOptions& opts = {});
double welfare_of_state(const Market& m, const EquilibriumState& state);

/// Largest root of p*D(p) = c (descending scan from the derivative bound,
/// then bisection). For c = 0 returns the smallest price with D(p) = 0;
/// if demand never vanishes (entropy benefits) the bound is returned with
/// `capped` set.
double find_p_upper(const Market& m, const SolverOptions& opts = {}, bool* capped = nullptr);

/// Lowest market-clearing price: infimum of {p : S(p) >= D(p)} by
/// bisection over [0, p_upper], valid under the single-crossing structure.
double find_p_c(const Market& m, double epsilon = 0.0, const SolverOptions& opts = {});

/// Maximizer of the potential revenue p * D(p) over [0, p_upper].
double find_p_potential(const Market& m, const SolverOptions& opts = {});

/// Revenue-optimal price: p_potential when feasible without a supply
/// shortage, otherwise the clearing price; cross-checked against a direct
/// maximization of p*D(p) over [p_c, p_upper].
std::pair<double, double> optimize_revenue(const Market& m, const SolverOptions& opts = {});

/// Welfare-optimal price (= clearing price), cross-checked by a welfare
/// sweep that must not beat it.
std::pair<double, double> optimize_welfare(const Market& m, const SolverOptions& opts = {});

/// Gap bounds from two already-solved states (shared core).
GapBound gap_bounds_from_states(const Market& m, const EquilibriumState& sw_state,
                                const EquilibriumState& r_state,
                                const SolverOptions& opts = {});

/// Solve both equilibria, then compute the bounds.
GapBound welfare_gap_bounds(const Market& m, double p_sw, double p_r,
                            const SolverOptions& opts = {});

/// Clearing and shutdown prices only (cheap; used for regime labels).
PriceAnalysis analyze_structural_prices(const Market& m, double epsilon = 0.0,
                                        const SolverOptions& opts = {});

/// Full analysis: structural prices, both optimal prices, objectives.
PriceAnalysis analyze_prices(const Market& m, const SolverOptions& opts = {});

}  // namespace sharemkt
