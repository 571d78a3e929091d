// sharemkt: two-sided sharing-market equilibrium and pricing toolkit.
//
// Subcommands: solve, sweep, price-opt, subsidy-opt, fit, gap-bound,
// oracle-check. Single-result reports are JSON, sweeps are CSV. Exit codes:
// 0 ok, 1 bad input/config, 2 numeric failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sharemkt/calibration.hpp"
#include "sharemkt/equilibrium.hpp"
#include "sharemkt/errors.hpp"
#include "sharemkt/io.hpp"
#include "sharemkt/market.hpp"
#include "sharemkt/oracle.hpp"
#include "sharemkt/pricing.hpp"
#include "sharemkt/scenario.hpp"
#include "sharemkt/subsidy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sharemkt;

namespace {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("SHAREMKT_LOG");
    if (!env) return LogLevel::Info;
    std::string v = env;
    if (v == "quiet") return LogLevel::Quiet;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

void info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << msg << "\n";
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 0;  // 0 = logical cores
    std::optional<std::uint64_t> seed;
};

json state_to_json(const EquilibriumState& st) {
    return json{{"price", st.price},
                {"epsilon", st.epsilon},
                {"total_supply", st.total_supply},
                {"total_demand", st.total_demand},
                {"effective_price", st.effective_price},
                {"iterations", st.iterations},
                {"converged", st.converged},
                {"max_residual", st.max_residual}};
}

void attach_seed(json& j, const ScenarioConfig& cfg) {
    if (cfg.seed) j["seed"] = *cfg.seed;
}

void emit(const CommonArgs& args, const std::string& filename, const json& j) {
    fs::create_directories(args.out_dir);
    std::string path = (fs::path(args.out_dir) / filename).string();
    write_text_file(path, j.dump(2) + "\n");
    info("wrote " + path);
}

int cmd_solve(const CommonArgs& args, double price, double epsilon) {
    if (price < 0.0) {
        std::cerr << "error: price must be nonnegative\n";
        return 1;
    }
    if (epsilon < 0.0) {
        std::cerr << "error: epsilon must be nonnegative\n";
        return 1;
    }
    ScenarioConfig cfg = load_scenario(args.config_path, args.seed);
    Market m = cfg.build();
    ValidationReport rep = validate_market(m, cfg.solver);
    if (!rep.ok()) {
        std::cerr << "error: " << rep.summary() << "\n";
        return 1;
    }
    try {
        EquilibriumState st = solve_equilibrium(m, price, epsilon, cfg.solver);
        json j = state_to_json(st);
        attach_seed(j, cfg);
        emit(args, "solve.json", j);
        fs::create_directories(args.out_dir);
        write_text_file((fs::path(args.out_dir) / "agents.csv").string(), agents_to_csv(st));
        info("S=" + format_float(st.total_supply) + " D=" + format_float(st.total_demand));
        return 0;
    } catch (const NonConvergenceError& e) {
        json j = state_to_json(e.best_iterate);
        j["error"] = e.what();
        attach_seed(j, cfg);
        emit(args, "solve.json", j);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_sweep(const CommonArgs& args, double pmin, double pmax, int steps, double epsilon) {
    if (steps < 1 || pmax < pmin || pmin < 0.0) {
        std::cerr << "error: need pmin >= 0, pmax >= pmin, steps >= 1\n";
        return 1;
    }
    ScenarioConfig cfg = load_scenario(args.config_path, args.seed);
    Market m = cfg.build();
    ValidationReport rep = validate_market(m, cfg.solver);
    if (!rep.ok()) {
        std::cerr << "error: " << rep.summary() << "\n";
        return 1;
    }
    std::vector<double> grid;
    for (int j = 0; j < steps; ++j) {
        grid.push_back(steps == 1 ? pmin
                                  : pmin + (pmax - pmin) * static_cast<double>(j) / (steps - 1));
    }
    int jobs = args.jobs > 0 ? args.jobs
                             : static_cast<int>(std::thread::hardware_concurrency());
    std::vector<SweepRow> rows = sweep(m, grid, epsilon, cfg.solver, std::max(1, jobs));
    fs::create_directories(args.out_dir);
    std::string path = (fs::path(args.out_dir) / "sweep.csv").string();
    write_text_file(path, sweep_to_csv(rows));
    info("wrote " + path);
    return 0;
}

int cmd_price_opt(const CommonArgs& args) {
    ScenarioConfig cfg = load_scenario(args.config_path, args.seed);
    Market m = cfg.build();
    PriceAnalysis pa = analyze_prices(m, cfg.solver);
    GapBound gb = welfare_gap_bounds(m, pa.p_sw, pa.p_r, cfg.solver);
    json j{{"p_c", pa.p_c},
           {"p_upper", pa.p_upper},
           {"p_upper_capped", pa.p_upper_capped},
           {"p_potential", pa.p_potential},
           {"p_r", pa.p_r},
           {"p_sw", pa.p_sw},
           {"revenue_at_p_r", pa.revenue_at_p_r},
           {"welfare_at_p_sw", pa.welfare_at_p_sw},
           {"welfare_at_p_r", pa.welfare_at_p_r},
           {"gap", gb.actual_gap},
           {"bounds",
            json{{"general", gb.bound_general},
                 {"special", gb.bound_special},
                 {"special_valid", gb.special_valid},
                 {"interpretable", gb.bound_interpretable}}}};
    attach_seed(j, cfg);
    emit(args, "price_opt.json", j);
    return 0;
}

int cmd_subsidy_opt(const CommonArgs& args, double eps_max) {
    ScenarioConfig cfg = load_scenario(args.config_path, args.seed);
    if (eps_max > 0.0) cfg.solver.epsilon_max = eps_max;
    Market m = cfg.build();
    SubsidyOutcome out = optimize_subsidy(m, SubsidyCostModel::PerUnitEpsilon, cfg.solver);
    json j{{"eps_star", out.epsilon},
           {"p_star", out.price},
           {"V_eps", out.net_revenue},
           {"V_0", out.baseline_revenue},
           {"improved", out.improved},
           {"regime", to_string(out.regime)},
           {"cost_model", to_string(out.cost_model)},
           {"both_cost_model_values",
            json{{"per_unit_epsilon", out.net_revenue},
                 {"per_unit_price_epsilon", out.net_revenue_alt}}},
           {"supply", out.state.total_supply},
           {"demand", out.state.total_demand}};
    if (out.F_bound) j["F_bound"] = *out.F_bound;
    attach_seed(j, cfg);
    emit(args, "subsidy_opt.json", j);
    return 0;
}

int cmd_fit(const CommonArgs& args, const std::string& input, double offset, bool smooth) {
    std::vector<TransactionRecord> records = load_transactions_csv(input);
    DemandFit fit = fit_exponential_demand(records, offset, smooth);
    json j{{"alpha", fit.alpha},        {"beta", fit.beta},
           {"r2", fit.r2},              {"p_offset", fit.p_offset},
           {"n_rows_used", fit.rows_used}, {"n_rows_dropped", fit.rows_dropped}};
    emit(args, "fit.json", j);
    return 0;
}

int cmd_gap_bound(const CommonArgs& args) {
    ScenarioConfig cfg = load_scenario(args.config_path, args.seed);
    Market m = cfg.build();
    auto [p_sw, w_sw] = optimize_welfare(m, cfg.solver);
    auto [p_r, r_r] = optimize_revenue(m, cfg.solver);
    GapBound gb = welfare_gap_bounds(m, p_sw, p_r, cfg.solver);
    json j{{"p_sw", p_sw},
           {"p_r", p_r},
           {"welfare_at_p_sw", w_sw},
           {"revenue_at_p_r", r_r},
           {"gap", gb.actual_gap},
           {"bound_general", gb.bound_general},
           {"bound_special", gb.bound_special},
           {"special_valid", gb.special_valid},
           {"bound_interpretable", gb.bound_interpretable}};
    attach_seed(j, cfg);
    emit(args, "gap_bound.json", j);
    return 0;
}

int cmd_oracle_check(const CommonArgs& args, int grid, std::vector<double> prices) {
    ScenarioConfig cfg = load_scenario(args.config_path, args.seed);
    Market m = cfg.build();
    if (m.num_owners() > 6) {
        std::cerr << "error: oracle-check supports at most 6 owners\n";
        return 1;
    }
    if (prices.empty()) {
        PriceAnalysis pa = analyze_structural_prices(m, 0.0, cfg.solver);
        prices = {0.5 * pa.p_c, pa.p_c, 0.5 * (pa.p_c + pa.p_upper), pa.p_upper,
                  1.05 * pa.p_upper};
    }
    double cell = 1.0 / (grid - 1);
    double worst = 0.0;
    json per_price = json::array();
    for (double p : prices) {
        EquilibriumState fast = solve_equilibrium(m, p, 0.0, cfg.solver);
        EquilibriumState slow = brute_force_equilibrium(m, p, 0.0, grid);
        double diff = 0.0;
        for (std::size_t i = 0; i < m.num_owners(); ++i) {
            diff = std::max({diff,
                             std::abs(fast.owner_actions[i].x - slow.owner_actions[i].x),
                             std::abs(fast.owner_actions[i].s - slow.owner_actions[i].s)});
        }
        worst = std::max(worst, diff);
        per_price.push_back(json{{"price", p}, {"max_action_diff", diff}});
    }
    bool pass = worst <= 2.0 * cell;
    json j{{"grid", grid},
           {"prices", per_price},
           {"max_action_diff", worst},
           {"tolerance", 2.0 * cell},
           {"pass", pass}};
    attach_seed(j, cfg);
    emit(args, "oracle_check.json", j);
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-sided sharing-market equilibrium and pricing toolkit"};
    app.require_subcommand(1);

    CommonArgs common;
    app.add_option("--config", common.config_path, "Scenario JSON file");
    app.add_option("--out", common.out_dir, "Output directory");
    app.add_option("--jobs", common.jobs, "Worker threads for sweeps (default: cores)");
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "Override generator seeds");

    double price = 0.0, epsilon = 0.0;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one equilibrium");
    solve_cmd->add_option("--price", price, "Platform price")->required();
    solve_cmd->add_option("--epsilon", epsilon, "Subsidy factor");

    double pmin = 0.0, pmax = 0.0, sweep_eps = 0.0;
    int steps = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "Equilibrium sweep over prices");
    sweep_cmd->add_option("--pmin", pmin, "Grid start")->required();
    sweep_cmd->add_option("--pmax", pmax, "Grid end")->required();
    sweep_cmd->add_option("--steps", steps, "Grid size")->required();
    sweep_cmd->add_option("--epsilon", sweep_eps, "Subsidy factor");

    auto* price_opt_cmd = app.add_subcommand("price-opt", "Structural and optimal prices");

    double eps_max = 0.0;
    auto* subsidy_cmd = app.add_subcommand("subsidy-opt", "Optimal sharing subsidy");
    subsidy_cmd->add_option("--eps-max", eps_max, "Subsidy search upper bound");

    std::string fit_input;
    double fit_offset = 0.0;
    bool fit_smooth = false;
    auto* fit_cmd = app.add_subcommand("fit", "Fit exponential demand from transactions");
    fit_cmd->add_option("--input", fit_input, "price,count CSV")->required();
    fit_cmd->add_option("--offset", fit_offset, "Zero-price reset (minimum charge)");
    fit_cmd->add_flag("--smooth", fit_smooth, "Add-one smoothing for sparse counts");

    auto* gap_cmd = app.add_subcommand("gap-bound", "Welfare gap and its bounds");

    int oracle_grid = 501;
    std::vector<double> oracle_prices;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare solver to grid oracle");
    oracle_cmd->add_option("--grid", oracle_grid, "Oracle grid resolution");
    oracle_cmd->add_option("--price", oracle_prices, "Prices to check (repeatable)");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) common.seed = seed_val;

    try {
        if (app.got_subcommand(solve_cmd)) return cmd_solve(common, price, epsilon);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(common, pmin, pmax, steps, sweep_eps);
        if (app.got_subcommand(price_opt_cmd)) return cmd_price_opt(common);
        if (app.got_subcommand(subsidy_cmd)) return cmd_subsidy_opt(common, eps_max);
        if (app.got_subcommand(fit_cmd)) return cmd_fit(common, fit_input, fit_offset, fit_smooth);
        if (app.got_subcommand(gap_cmd)) return cmd_gap_bound(common);
        if (app.got_subcommand(oracle_cmd))
            return cmd_oracle_check(common, oracle_grid, oracle_prices);
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
