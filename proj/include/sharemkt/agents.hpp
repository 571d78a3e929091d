#pragma once

#include "sharemkt/benefit.hpp"
#include "sharemkt/market.hpp"
#include "sharemkt/options.hpp"

namespace sharemkt {

/// Everything one owner needs to know about the rest of the market.
/// `unit_subsidy` is the extra income per unit of sharing; the subsidized
/// income stream per shared unit is p * min{D/S, 1} + unit_subsidy.
struct OwnerEnvironment {
    double price = 0.0;          // platform price p
    double cost = 0.0;           // per-unit cost c
    double unit_subsidy = 0.0;   // subsidy income per unit of sharing
    double total_demand = 0.0;   // D(p)
    double others_supply = 0.0;  // sum of the other owners' share levels
};

/// Fraction of a unit of sharing that earns revenue when own supply is s:
/// min{D / (S_others + s), 1}, with the 0-supply convention that a lone
/// marginal sharer is matched iff any demand exists.
double matching_factor(double total_demand, double others_supply, double s);

/// Owner utility at (x, s) in the given environment.
double owner_utility(const BenefitFunction& f, const OwnerEnvironment& env, double x, double s);

/// Usage maximizing g(y) - p*y; ties resolve to the smaller y. Entropy
/// benefits are uncapped above 1 (they model calibrated usage
/// frequencies), every other variant stays in [0,1].
double renter_demand(const BenefitFunction& g, double price);

/// Total demand D(p) = sum of renter demands; owners play no role.
double aggregate_demand(const Market& m, double price);

/// Owner best response over the simplex {x,s >= 0, x+s <= 1}.
/// For fixed s the optimal x is min(xhat, 1-s) with xhat maximizing
/// f(x) - c*x; the reduced objective in s is concave, so its maximizer is
/// pinned by a sign bisection of the one-sided derivative on each smooth
/// segment (kinks: x starts tracking the budget, matching saturates).
Action owner_best_response(const BenefitFunction& f, const OwnerEnvironment& env,
                           const SolverOptions& opts = {});

/// Maximum violation of the one-sided first-order (exchange) conditions at
/// (x, s): swapping mass between self-use and sharing must not pay. Zero
/// means the conditions hold. Boundary cases drop the inapplicable side.
double gradient_residual(const BenefitFunction& f, const OwnerEnvironment& env, double x,
                         double s);

}  // namespace sharemkt
