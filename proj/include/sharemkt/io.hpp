#pragma once

#include <string>
#include <vector>

#include "sharemkt/equilibrium.hpp"

namespace sharemkt {

/// Locale-independent float formatting with 12 significant digits; the
/// contract for every CSV column this library emits.
std::string format_float(double v);

/// Sweep CSV with the fixed header
/// p,S,D,revenue,welfare,regime,converged,iters,max_residual
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// Per-agent CSV: kind,index,x,s,y (owner rows leave y empty, renter rows
/// leave x,s empty).
std::string agents_to_csv(const EquilibriumState& state);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sharemkt
