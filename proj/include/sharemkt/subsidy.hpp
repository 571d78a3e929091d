#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sharemkt/equilibrium.hpp"
#include "sharemkt/market.hpp"
#include "sharemkt/options.hpp"

namespace sharemkt {

enum class SubsidyRegime { Small, Medium, Large };
enum class SubsidyCostModel { PerUnitEpsilon, PerUnitPriceEpsilon };

std::string to_string(SubsidyRegime r);
std::string to_string(SubsidyCostModel c);

/// Structural classification of a subsidized equilibrium plus the
/// threshold inequalities evaluated against the unsubsidized baseline.
struct SubsidyClassification {
    SubsidyRegime regime = SubsidyRegime::Small;
    // Thresholds per owner, computed from the eps=0 equilibrium at the
    // same price (small) and the subsidized state itself (large).
    std::vector<double> small_threshold;
    std::vector<double> large_threshold;
    bool thresholds_agree = true;  // threshold-based label matches the structural one
};

/// Per-owner square-root supply bound for small subsidies.
struct SupplyBound {
    std::vector<double> per_owner;      // NaN where the small-subsidy condition fails
    std::optional<double> min_applicable;
    bool applicable() const { return min_applicable.has_value(); }
};

/// Subsidy search outcome.
struct SubsidyOutcome {
    double epsilon = 0.0;
    double price = 0.0;
    EquilibriumState state;
    SubsidyRegime regime = SubsidyRegime::Small;
    std::optional<double> F_bound;
    double net_revenue = 0.0;       // under the selected cost model
    double net_revenue_alt = 0.0;   // under the other cost model
    SubsidyCostModel cost_model = SubsidyCostModel::PerUnitEpsilon;
    double baseline_revenue = 0.0;  // V0 without subsidy
    bool improved = false;
};

SubsidyClassification classify_subsidy_regime(const Market& m, const EquilibriumState& state,
                                              const SolverOptions& opts = {});

SupplyBound supply_bound_F(const Market& m, double price, double epsilon,
                           const SolverOptions& opts = {});

/// Net revenue p*min{D, S} minus the subsidy bill. The default model
/// charges eps per unit of supply; the alternative charges p*eps.
double net_revenue(const Market& m, double price, double epsilon,
                   SubsidyCostModel model = SubsidyCostModel::PerUnitEpsilon,
                   const SolverOptions& opts = {});

/// Search for the net-revenue-optimal subsidy. The platform prices at
/// max(p_potential, p_c^eps) so it never sells below clearing; the outer
/// search splits where those two branches cross.
SubsidyOutcome optimize_subsidy(const Market& m,
                                SubsidyCostModel model = SubsidyCostModel::PerUnitEpsilon,
                                const SolverOptions& opts = {});

}  // namespace sharemkt
