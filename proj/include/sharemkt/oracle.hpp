#pragma once

#include <utility>
#include <vector>

#include "sharemkt/equilibrium.hpp"
#include "sharemkt/market.hpp"
#include "sharemkt/options.hpp"
#include "sharemkt/pricing.hpp"

namespace sharemkt {

/// Closed-form solution of the all-linear market where every agent is a
/// corner agent: owners share fully iff the price beats their private
/// value, renters demand fully iff their value beats the price. Solved by
/// ranking the merged private values; used as an independent check.
struct LinearMarketSolution {
    std::vector<double> ranked_values;  // all private values, descending

    std::pair<double, double> p_sw_interval;  // open clearing interval
    double p_r = 0.0;                         // revenue-optimal point (see note)
    std::pair<double, double> p_r_interval;   // interval whose upper end carries the sup

    double welfare_sw = 0.0;
    double welfare_r = 0.0;
    double gap = 0.0;

    double bound_general = 0.0;
    double bound_special = 0.0;
    bool special_valid = false;
    double bound_interpretable = 0.0;

    // Corner allocations packaged as states (prices: interval midpoint for
    // welfare side, p_r for revenue side) so the generic bound code can be
    // run against them.
    EquilibriumState sw_state;
    EquilibriumState r_state;
};

/// Step-function enumeration over the ranked values. Revenue's supremum is
/// approached at a demand step and never attained under the
/// non-participation tie-break; the reported point backs off half the cost
/// below the step (the interval midpoint when c = 0).
LinearMarketSolution linear_market_solve(const std::vector<double>& owner_values,
                                         const std::vector<double>& renter_values, double cost);

/// Exhaustive grid best-response iteration (round-robin, all-zero start)
/// until no owner can improve by more than 1e-6 on the grid. Exact on the
/// grid; intended for small markets only (num_owners <= 6, grid_n <= 501).
EquilibriumState brute_force_equilibrium(const Market& m, double price, double epsilon,
                                         int grid_n);

}  // namespace sharemkt
