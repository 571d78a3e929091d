#include "sharemkt/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sharemkt {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double uniform_draw(std::uint64_t& state, double lo, double hi) {
    double unit = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

namespace {

std::pair<double, double> parse_range(const json& j, const std::string& key) {
    const auto& r = j.at(key);
    if (!r.is_array() || r.size() != 2) {
        throw std::invalid_argument("'" + key + "' must be a [lo, hi] pair");
    }
    return {r[0].get<double>(), r[1].get<double>()};
}

template <typename Agent>
void append_agents(std::vector<Agent>& out, const json& arr,
                   std::optional<std::uint64_t> seed_override,
                   std::optional<std::uint64_t>& seed_used) {
    if (!arr.is_array()) throw std::invalid_argument("agent list must be an array");
    for (const auto& entry : arr) {
        std::string variant = entry.at("variant").get<std::string>();
        std::size_t count = entry.value("count", std::size_t{1});
        bool generated = entry.contains("count");
        std::uint64_t rng = 0;
        if (generated && (entry.contains("a_range") || entry.contains("b_range") ||
                          entry.contains("alpha_range"))) {
            std::uint64_t seed = seed_override
                                     ? *seed_override
                                     : entry.value("seed", std::uint64_t{0});
            seed_used = seed;
            rng = seed;
        }
        for (std::size_t k = 0; k < count; ++k) {
            if (variant == "quadratic") {
                double a, b;
                if (entry.contains("a_range")) {
                    auto [alo, ahi] = parse_range(entry, "a_range");
                    auto [blo, bhi] = parse_range(entry, "b_range");
                    a = uniform_draw(rng, alo, ahi);
                    b = uniform_draw(rng, blo, bhi);
                } else {
                    a = entry.at("a").get<double>();
                    b = entry.at("b").get<double>();
                }
                out.push_back(Agent{BenefitFunction::quadratic(a, b)});
            } else if (variant == "linear") {
                double alpha;
                if (entry.contains("alpha_range")) {
                    auto [lo, hi] = parse_range(entry, "alpha_range");
                    alpha = uniform_draw(rng, lo, hi);
                } else {
                    alpha = entry.at("alpha").get<double>();
                }
                out.push_back(Agent{BenefitFunction::linear(alpha)});
            } else if (variant == "entropy") {
                double alpha = entry.at("alpha").get<double>();
                double beta = entry.at("beta").get<double>();
                double n = entry.value("n", static_cast<double>(count));
                out.push_back(Agent{BenefitFunction::entropy(alpha, beta, n)});
            } else if (variant == "tabulated") {
                std::vector<std::pair<double, double>> pts;
                for (const auto& p : entry.at("points")) {
                    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
                }
                out.push_back(Agent{BenefitFunction::tabulated(std::move(pts))});
            } else {
                throw std::invalid_argument("unknown benefit variant '" + variant + "'");
            }
        }
    }
}

void apply_solver_overrides(SolverOptions& opts, const json& j) {
    opts.value_tol = j.value("value_tol", opts.value_tol);
    opts.action_tol = j.value("action_tol", opts.action_tol);
    opts.price_tol = j.value("price_tol", opts.price_tol);
    opts.damping = j.value("damping", opts.damping);
    opts.max_iterations = j.value("max_iterations", opts.max_iterations);
    opts.verify_grid = j.value("verify_grid", opts.verify_grid);
    opts.verify_tol = j.value("verify_tol", opts.verify_tol);
    opts.clearing_tol_factor = j.value("clearing_tol_factor", opts.clearing_tol_factor);
    opts.epsilon_max = j.value("epsilon_max", opts.epsilon_max);
    opts.epsilon_tol = j.value("epsilon_tol", opts.epsilon_tol);
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text,
                                   std::optional<std::uint64_t> seed_override) {
    json j = json::parse(text);
    ScenarioConfig cfg;
    cfg.cost = j.at("cost").get<double>();
    cfg.deriv_bound = j.at("deriv_bound").get<double>();
    append_agents(cfg.owners, j.at("owners"), seed_override, cfg.seed);
    append_agents(cfg.renters, j.at("renters"), seed_override, cfg.seed);
    if (j.contains("solver")) apply_solver_overrides(cfg.solver, j.at("solver"));
    if (seed_override) cfg.seed = seed_override;
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path,
                             std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario_json(buf.str(), seed_override);
    } catch (const json::exception& e) {
        throw std::invalid_argument("scenario parse error in " + path + ": " + e.what());
    }
}

}  // namespace sharemkt
