#pragma once

#include <cstdint>

namespace sharemkt {

/// Centralized tolerance and iteration settings. Defaults match the
/// documented contracts of the library; scenario files may override them.
struct SolverOptions {
    double value_tol = 1e-9;    // utility-value comparisons
    double action_tol = 1e-9;   // per-agent action coordinates
    double price_tol = 1e-6;    // price root-finding / reporting

    double damping = 0.5;            // simultaneous best-response step
    double damping_floor = 1.0 / 64.0;
    int max_iterations = 10000;      // fixed-point iteration cap
    int stall_window = 50;           // iterations without progress before halving damping
    int golden_cap = 200;            // 1-D search iteration cap

    int verify_grid = 201;           // grid used to certify convergence
    double verify_tol = 1e-4;        // max unilateral improvement accepted

    // |S - D| <= clearing_tol_factor * max(D, 1) counts as market clearing.
    double clearing_tol_factor = 1e-4;

    double epsilon_max = 2.0;   // subsidy search range upper end
    double epsilon_tol = 1e-3;  // subsidy search resolution
};

}  // namespace sharemkt
