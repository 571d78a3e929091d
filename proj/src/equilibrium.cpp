#include "sharemkt/equilibrium.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "sharemkt/pricing.hpp"

namespace sharemkt {

namespace {

std::uint64_t hash_actions(const std::vector<Action>& actions) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        h ^= bits;
        h *= 1099511628211ull;
    };
    for (const auto& a : actions) {
        mix(a.x);
        mix(a.s);
    }
    return h;
}

double total_supply_of(const std::vector<Action>& actions) {
    double s = 0.0;
    for (const auto& a : actions) s += a.s;
    return s;
}

struct ResponseMemo {
    // Keyed by (owner benefit group, exact bits of others' supply).
    std::unordered_map<std::uint64_t, Action> map;

    static std::uint64_t key(int group, double others_supply) {
        std::uint64_t bits;
        std::memcpy(&bits, &others_supply, sizeof(bits));
        return bits * 1099511628211ull + static_cast<std::uint64_t>(group);
    }
};

void fill_state(const Market& m, EquilibriumState& st) {
    st.total_supply = total_supply_of(st.owner_actions);
    st.renter_usages.resize(m.num_renters());
    double d = 0.0;
    for (std::size_t k = 0; k < m.num_renters(); ++k) {
        st.renter_usages[k] = renter_demand(m.renters()[k].benefit, st.price);
        d += st.renter_usages[k];
    }
    st.total_demand = d;
    st.effective_price =
        st.price * matching_factor(st.total_demand, st.total_supply, 0.0);
    double res = 0.0;
    for (std::size_t i = 0; i < m.num_owners(); ++i) {
        OwnerEnvironment env{st.price, m.cost(), st.epsilon, st.total_demand,
                             st.total_supply - st.owner_actions[i].s};
        res = std::max(res, gradient_residual(m.owners()[i].benefit, env,
                                              st.owner_actions[i].x, st.owner_actions[i].s));
    }
    st.max_residual = res;
}

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::BelowClearing: return "below_clearing";
        case Regime::Clearing: return "clearing";
        case Regime::Oversupplied: return "oversupplied";
        case Regime::Shutdown: return "shutdown";
    }
    return "unknown";
}

EquilibriumState solve_equilibrium(const Market& m, double price, double epsilon,
                                   const SolverOptions& opts) {
    if (!(price >= 0.0)) throw std::domain_error("price must be nonnegative");
    if (!(epsilon >= 0.0)) throw std::domain_error("subsidy must be nonnegative");

    const std::size_t n = m.num_owners();
    const double demand = aggregate_demand(m, price);

    std::vector<Action> actions(n);  // all-zero start
    double lambda = opts.damping;
    bool sequential = false;
    double best_change = std::numeric_limits<double>::infinity();
    int stall = 0;
    std::unordered_set<std::uint64_t> seen;
    seen.insert(hash_actions(actions));

    int iter = 0;
    double change = std::numeric_limits<double>::infinity();
    for (; iter < opts.max_iterations; ++iter) {
        double total = total_supply_of(actions);
        change = 0.0;
        if (!sequential) {
            ResponseMemo memo;
            std::vector<Action> next(n);
            for (std::size_t i = 0; i < n; ++i) {
                double others = total - actions[i].s;
                auto key = ResponseMemo::key(m.owner_group()[i], others);
                Action resp;
                auto it = memo.map.find(key);
                if (it != memo.map.end()) {
                    resp = it->second;
                } else {
                    OwnerEnvironment env{price, m.cost(), epsilon, demand, others};
                    resp = owner_best_response(m.owners()[i].benefit, env, opts);
                    memo.map.emplace(key, resp);
                }
                next[i].x = (1.0 - lambda) * actions[i].x + lambda * resp.x;
                next[i].s = (1.0 - lambda) * actions[i].s + lambda * resp.s;
                change = std::max({change, std::abs(next[i].x - actions[i].x),
                                   std::abs(next[i].s - actions[i].s)});
            }
            actions.swap(next);

            if (change < opts.action_tol) {
                ++iter;
                break;
            }
            // Cycle detection: a revisited state can never converge under a
            // deterministic map, so switch to sequential updates.
            if (!seen.insert(hash_actions(actions)).second) {
                sequential = true;
                seen.clear();
                continue;
            }
            // Oscillation (or the value-comparison noise floor of the 1-D
            // searches) shows up as a change norm that stops shrinking;
            // demand a real improvement over the best norm seen since the
            // last damping adjustment, then halve the step.
            if (change < 0.97 * best_change) {
                best_change = change;
                stall = 0;
            } else if (++stall >= opts.stall_window) {
                stall = 0;
                lambda = std::max(lambda / 2.0, opts.damping_floor);
                best_change = change;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                double others = total - actions[i].s;
                OwnerEnvironment env{price, m.cost(), epsilon, demand, others};
                Action resp = owner_best_response(m.owners()[i].benefit, env, opts);
                change = std::max({change, std::abs(resp.x - actions[i].x),
                                   std::abs(resp.s - actions[i].s)});
                total += resp.s - actions[i].s;
                actions[i] = resp;
            }
            if (change < opts.action_tol) {
                ++iter;
                break;
            }
        }
    }

    EquilibriumState st;
    st.price = price;
    st.epsilon = epsilon;
    st.owner_actions = std::move(actions);
    st.iterations = iter;
    st.final_change = change;
    fill_state(m, st);

    bool action_converged = change < opts.action_tol;
    double improvement = verify_equilibrium(m, st, opts.verify_grid);
    st.converged = action_converged && improvement <= opts.verify_tol;

    if (!action_converged) {
        throw NonConvergenceError(
            "equilibrium iteration hit the cap (" + std::to_string(opts.max_iterations) +
                ") at price " + std::to_string(price) + "; last change " +
                std::to_string(change),
            st);
    }
    return st;
}

double verify_equilibrium(const Market& m, const EquilibriumState& state, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("grid_n must be >= 2");
    const std::size_t levels = static_cast<std::size_t>(grid_n);
    const double step = 1.0 / static_cast<double>(grid_n - 1);
    double worst = 0.0;

    // Owners: U(x,s) = [f(x) - c x] + [p (match(s)+eps) s - c s] with the
    // only coupling x <= 1 - s, so max over the simplex grid equals
    // prefix-max of the x-part combined with each s level.
    std::vector<double> fx(levels);
    std::vector<double> prefix(levels);
    for (std::size_t i = 0; i < m.num_owners(); ++i) {
        const auto& f = m.owners()[i].benefit;
        double others = state.total_supply - state.owner_actions[i].s;
        OwnerEnvironment env{state.price, m.cost(), state.epsilon, state.total_demand, others};
        double current = owner_utility(f, env, state.owner_actions[i].x,
                                       state.owner_actions[i].s);
        for (std::size_t j = 0; j < levels; ++j) {
            double x = static_cast<double>(j) * step;
            fx[j] = f.value(std::min(x, 1.0)) - m.cost() * x;
            prefix[j] = j == 0 ? fx[j] : std::max(prefix[j - 1], fx[j]);
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < levels; ++j) {
            double s = static_cast<double>(j) * step;
            double match = matching_factor(env.total_demand, env.others_supply, s);
            double share_part = env.price * (match + env.epsilon) * s - m.cost() * s;
            best = std::max(best, prefix[levels - 1 - j] + share_part);
        }
        worst = std::max(worst, best - current);
    }

    // Renters: independent 1-D problems.
    for (std::size_t k = 0; k < m.num_renters(); ++k) {
        const auto& g = m.renters()[k].benefit;
        double y = state.renter_usages[k];
        double current = g.value(y) - state.price * y;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < levels; ++j) {
            double u = static_cast<double>(j) * step;
            best = std::max(best, g.value(std::min(u, 1.0)) - state.price * u);
        }
        worst = std::max(worst, best - current);
    }
    return std::max(worst, 0.0);
}

Regime classify_regime_state(const Market& m, const EquilibriumState& state,
                             const PriceAnalysis& analysis, const SolverOptions& opts) {
    const double p = state.price;
    const double band = 10.0 * opts.price_tol * std::max(1.0, p);
    Regime label;
    if (p < analysis.p_c - band) {
        label = Regime::BelowClearing;
    } else if (p <= analysis.p_c + band) {
        label = Regime::Clearing;
    } else if (p <= analysis.p_upper + band) {
        label = Regime::Oversupplied;
    } else {
        label = Regime::Shutdown;
    }

    const double S = state.total_supply;
    const double D = state.total_demand;
    const double ctol = opts.clearing_tol_factor * std::max(D, 1.0);
    bool consistent = true;
    switch (label) {
        case Regime::BelowClearing: consistent = S <= D + ctol; break;
        case Regime::Clearing: consistent = std::abs(S - D) <= ctol; break;
        case Regime::Oversupplied: consistent = S >= D - ctol; break;
        case Regime::Shutdown: consistent = S <= 1e-6 * std::max(1.0, double(m.num_owners()));
    }
    if (!consistent) {
        throw InconsistentRegimeError(
            "price-interval label '" + to_string(label) + "' disagrees with S=" +
            std::to_string(S) + ", D=" + std::to_string(D) + " at p=" + std::to_string(p));
    }
    return label;
}

Regime classify_regime(const Market& m, double price, const PriceAnalysis& analysis,
                       const SolverOptions& opts) {
    EquilibriumState st = solve_equilibrium(m, price, 0.0, opts);
    return classify_regime_state(m, st, analysis, opts);
}

std::vector<SweepRow> sweep(const Market& m, const std::vector<double>& price_grid,
                            double epsilon, const SolverOptions& opts, int jobs) {
    if (price_grid.empty()) throw std::invalid_argument("price grid must be nonempty");
    for (std::size_t i = 1; i < price_grid.size(); ++i) {
        if (price_grid[i] < price_grid[i - 1]) {
            throw std::invalid_argument("price grid must be ascending");
        }
    }

    // Structural prices once, for regime labels.
    PriceAnalysis analysis = analyze_structural_prices(m, epsilon, opts);

    std::vector<SweepRow> rows(price_grid.size());
    auto run_row = [&](std::size_t idx) {
        SweepRow& row = rows[idx];
        row.price = price_grid[idx];
        try {
            EquilibriumState st = solve_equilibrium(m, row.price, epsilon, opts);
            row.supply = st.total_supply;
            row.demand = st.total_demand;
            row.revenue = row.price * std::min(st.total_supply, st.total_demand);
            row.welfare = welfare_of_state(m, st);
            row.converged = st.converged;
            row.iterations = st.iterations;
            row.max_residual = st.max_residual;
            const double band = 10.0 * opts.price_tol * std::max(1.0, row.price);
            if (row.price < analysis.p_c - band) {
                row.regime = to_string(Regime::BelowClearing);
            } else if (row.price <= analysis.p_c + band) {
                row.regime = to_string(Regime::Clearing);
            } else if (row.price <= analysis.p_upper + band) {
                row.regime = to_string(Regime::Oversupplied);
            } else {
                row.regime = to_string(Regime::Shutdown);
            }
        } catch (const NonConvergenceError& e) {
            const EquilibriumState& st = e.best_iterate;
            row.supply = st.total_supply;
            row.demand = st.total_demand;
            row.revenue = row.price * std::min(st.total_supply, st.total_demand);
            row.welfare = welfare_of_state(m, st);
            row.converged = false;
            row.iterations = st.iterations;
            row.max_residual = st.max_residual;
            row.regime = "error:non_convergence";
        }
    };

    int workers = std::max(1, jobs);
    if (workers == 1 || rows.size() == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) run_row(i);
    } else {
        std::atomic<std::size_t> cursor{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= rows.size()) return;
                run_row(i);
            }
        };
        std::vector<std::thread> pool;
        int count = std::min<std::size_t>(workers, rows.size());
        pool.reserve(count);
        for (int t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

}  // namespace sharemkt
