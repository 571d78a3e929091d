#pragma once

#include <string>
#include <vector>

#include "sharemkt/agents.hpp"
#include "sharemkt/errors.hpp"
#include "sharemkt/market.hpp"
#include "sharemkt/options.hpp"

namespace sharemkt {

/// Solved owner game at a fixed price (and subsidy), with diagnostics.
struct EquilibriumState {
    double price = 0.0;
    double epsilon = 0.0;
    std::vector<Action> owner_actions;
    std::vector<double> renter_usages;
    double total_supply = 0.0;
    double total_demand = 0.0;
    double effective_price = 0.0;  // p * min{D/S, 1}
    int iterations = 0;
    bool converged = false;
    double max_residual = 0.0;   // largest one-sided first-order violation
    double final_change = 0.0;   // last iteration's action-change norm
};

class NonConvergenceError : public SolverError {
  public:
    NonConvergenceError(const std::string& what, EquilibriumState best)
        : SolverError(what), best_iterate(std::move(best)) {}
    EquilibriumState best_iterate;
};

/// Theorem-1 price regime.
enum class Regime { BelowClearing, Clearing, Oversupplied, Shutdown };

std::string to_string(Regime r);

/// Damped simultaneous best-response iteration from the all-zero state;
/// falls back to sequential round-robin updates if the simultaneous
/// scheme cycles. Convergence is certified by a unilateral-deviation scan.
/// Throws NonConvergenceError (carrying the best iterate) at the
/// iteration cap.
EquilibriumState solve_equilibrium(const Market& m, double price, double epsilon = 0.0,
                                   const SolverOptions& opts = {});

/// Largest unilateral grid deviation improving any agent's utility
/// (0 = epsilon-Nash at this resolution). Exact on the grid: the simplex
/// scan is evaluated through a prefix-max decomposition.
double verify_equilibrium(const Market& m, const EquilibriumState& state, int grid_n);

struct PriceAnalysis;  // defined in pricing.hpp

/// Label the price regime from the structural prices and cross-check the
/// label against the solved state's supply/demand comparison. Throws
/// InconsistentRegimeError on disagreement.
Regime classify_regime(const Market& m, double price, const PriceAnalysis& analysis,
                       const SolverOptions& opts = {});

Regime classify_regime_state(const Market& m, const EquilibriumState& state,
                             const PriceAnalysis& analysis, const SolverOptions& opts = {});

struct SweepRow {
    double price = 0.0;
    double supply = 0.0;
    double demand = 0.0;
    double revenue = 0.0;
    double welfare = 0.0;
    std::string regime;
    bool converged = false;
    int iterations = 0;
    double max_residual = 0.0;
};

/// One row per price, rows independent; `jobs > 1` evaluates rows on a
/// worker pool. Output order always follows the input grid.
std::vector<SweepRow> sweep(const Market& m, const std::vector<double>& price_grid,
                            double epsilon = 0.0, const SolverOptions& opts = {},
                            int jobs = 1);

}  // namespace sharemkt
