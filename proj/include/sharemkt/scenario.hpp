#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sharemkt/market.hpp"
#include "sharemkt/options.hpp"

namespace sharemkt {

/// Parsed scenario file: market spec plus solver overrides.
struct ScenarioConfig {
    double cost = 0.0;
    double deriv_bound = 0.0;
    std::vector<Owner> owners;
    std::vector<Renter> renters;
    SolverOptions solver;
    std::optional<std::uint64_t> seed;  // seed actually used for generator blocks

    Market build() const { return Market(owners, renters, cost, deriv_bound); }
};

/// Load a JSON scenario. Agent arrays accept explicit entries
/// ({"variant":"quadratic","a":..,"b":..}) or generator blocks
/// ({"variant":"quadratic","count":100,"a_range":[lo,hi],"b_range":[lo,hi],
///   "seed":..}). `seed_override`, when set, replaces every generator seed.
ScenarioConfig load_scenario(const std::string& path,
                             std::optional<std::uint64_t> seed_override = {});

ScenarioConfig parse_scenario_json(const std::string& text,
                                   std::optional<std::uint64_t> seed_override = {});

/// Deterministic uniform draw on [lo, hi) from 53 mantissa bits; identical
/// across platforms for a given engine state.
double uniform_draw(std::uint64_t& state, double lo, double hi);

/// splitmix64 step; used as the generator behind uniform_draw.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace sharemkt
