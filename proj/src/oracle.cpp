#include "sharemkt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "sharemkt/errors.hpp"

namespace sharemkt {

namespace {

struct StepPoint {
    double demand = 0.0;  // renters with value > p
    double supply = 0.0;  // owners with value < p
};

StepPoint step_at(const std::vector<double>& owner_values,
                  const std::vector<double>& renter_values, double p) {
    StepPoint st;
    for (double v : renter_values) {
        if (v > p) st.demand += 1.0;
    }
    for (double v : owner_values) {
        if (v < p) st.supply += 1.0;
    }
    return st;
}

/// Corner allocation at price p: owner i shares iff p beats both its value
/// and the cost, self-uses iff its value beats both; renter k uses fully
/// iff its value beats p.
EquilibriumState corner_state(const std::vector<double>& owner_values,
                              const std::vector<double>& renter_values, double cost, double p) {
    EquilibriumState st;
    st.price = p;
    st.converged = true;
    st.owner_actions.resize(owner_values.size());
    for (std::size_t i = 0; i < owner_values.size(); ++i) {
        double v = owner_values[i];
        if (p > v && p > cost) {
            st.owner_actions[i] = {0.0, 1.0};
        } else if (v >= p && v > cost) {
            st.owner_actions[i] = {1.0, 0.0};
        } else {
            st.owner_actions[i] = {0.0, 0.0};
        }
        st.total_supply += st.owner_actions[i].s;
    }
    st.renter_usages.resize(renter_values.size());
    for (std::size_t k = 0; k < renter_values.size(); ++k) {
        st.renter_usages[k] = renter_values[k] > p ? 1.0 : 0.0;
        st.total_demand += st.renter_usages[k];
    }
    st.effective_price =
        p * (st.total_supply > 0.0
                 ? std::min(st.total_demand / st.total_supply, 1.0)
                 : (st.total_demand > 0.0 ? 1.0 : 0.0));
    return st;
}

double corner_welfare(const std::vector<double>& owner_values,
                      const std::vector<double>& renter_values, double cost,
                      const EquilibriumState& st) {
    double w = 0.0;
    for (std::size_t i = 0; i < owner_values.size(); ++i) {
        const Action& a = st.owner_actions[i];
        w += owner_values[i] * a.x - cost * (a.x + a.s);
    }
    double served = st.total_demand > 0.0
                        ? std::min(1.0, st.total_supply / st.total_demand)
                        : 1.0;
    for (std::size_t k = 0; k < renter_values.size(); ++k) {
        w += renter_values[k] * (served * st.renter_usages[k]);
    }
    return w;
}

}  // namespace

LinearMarketSolution linear_market_solve(const std::vector<double>& owner_values,
                                         const std::vector<double>& renter_values,
                                         double cost) {
    if (owner_values.empty() || renter_values.empty()) {
        throw std::invalid_argument("owner and renter value lists must be nonempty");
    }
    LinearMarketSolution sol;
    sol.ranked_values = owner_values;
    sol.ranked_values.insert(sol.ranked_values.end(), renter_values.begin(),
                             renter_values.end());
    std::sort(sol.ranked_values.begin(), sol.ranked_values.end(), std::greater<>());
    for (double v : sol.ranked_values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("private values must be positive and finite");
        }
    }
    for (std::size_t j = 1; j < sol.ranked_values.size(); ++j) {
        if (sol.ranked_values[j] == sol.ranked_values[j - 1]) {
            throw DuplicateValuesError("private values must be pairwise distinct");
        }
    }

    // Candidate open intervals between consecutive breakpoints (plus the
    // leading one); D and S are constant on each.
    std::vector<double> edges = sol.ranked_values;
    std::sort(edges.begin(), edges.end());
    std::vector<std::pair<double, double>> intervals;
    intervals.emplace_back(0.0, edges.front());
    for (std::size_t j = 1; j < edges.size(); ++j) {
        intervals.emplace_back(edges[j - 1], edges[j]);
    }

    // Clearing interval: D - S decreases by one at every breakpoint, so
    // D = S on exactly one stretch.
    bool found_sw = false;
    for (const auto& [lo, hi] : intervals) {
        double mid = 0.5 * (lo + hi);
        StepPoint st = step_at(owner_values, renter_values, mid);
        if (st.demand == st.supply) {
            sol.p_sw_interval = {lo, hi};
            found_sw = true;
            break;
        }
    }
    if (!found_sw) {
        // Degenerate (e.g., everything below cost): clear at zero trade
        // beyond the top value.
        sol.p_sw_interval = {edges.back(), edges.back()};
    }

    // Revenue: on each interval revenue = p * min{D, S} rises linearly, so
    // the supremum sits at the upper endpoint. Track the best interval.
    double best_rev = 0.0;
    std::pair<double, double> best_iv{0.0, 0.0};
    for (const auto& [lo, hi] : intervals) {
        double mid = 0.5 * (lo + hi);
        StepPoint st = step_at(owner_values, renter_values, mid);
        double traded = std::min(st.demand, st.supply);
        double rev = hi * traded;
        if (rev > best_rev) {
            best_rev = rev;
            best_iv = {lo, hi};
        }
    }
    sol.p_r_interval = best_iv;
    // The supremum is not attained (a renter at its own value walks away);
    // report the conventional point half a cost below the step, or the
    // interval midpoint when there is no cost to set the scale.
    double width = best_iv.second - best_iv.first;
    if (cost > 0.0 && cost < width) {
        sol.p_r = best_iv.second - 0.5 * cost;
    } else {
        sol.p_r = 0.5 * (best_iv.first + best_iv.second);
    }

    double p_sw_mid = 0.5 * (sol.p_sw_interval.first + sol.p_sw_interval.second);
    sol.sw_state = corner_state(owner_values, renter_values, cost, p_sw_mid);
    sol.r_state = corner_state(owner_values, renter_values, cost, sol.p_r);
    sol.welfare_sw = corner_welfare(owner_values, renter_values, cost, sol.sw_state);
    sol.welfare_r = corner_welfare(owner_values, renter_values, cost, sol.r_state);
    sol.gap = sol.welfare_sw - sol.welfare_r;

    const double D_sw = sol.sw_state.total_demand;
    const double S_sw = sol.sw_state.total_supply;
    const double D_r = sol.r_state.total_demand;
    const double S_r = sol.r_state.total_supply;
    const double ratio_r = S_r > 0.0 ? D_r / S_r : 0.0;
    double increased = 0.0;
    bool all_increased = true;
    for (std::size_t i = 0; i < owner_values.size(); ++i) {
        double ds = sol.r_state.owner_actions[i].s - sol.sw_state.owner_actions[i].s;
        if (ds >= 0.0) {
            increased += ds;
        } else {
            all_increased = false;
        }
    }
    sol.bound_general = sol.p_r * (D_sw - D_r) + sol.p_r * ratio_r * increased;
    sol.special_valid = all_increased;
    sol.bound_special = S_r > 0.0 ? sol.p_r * (D_sw - D_r * S_sw / S_r) : sol.p_r * D_sw;
    sol.bound_interpretable =
        sol.p_r * (D_sw - D_r) + sol.p_r * ratio_r * (S_r - S_sw);
    return sol;
}

EquilibriumState brute_force_equilibrium(const Market& m, double price, double epsilon,
                                         int grid_n) {
    if (m.num_owners() > 6) {
        throw std::invalid_argument("brute force oracle is limited to 6 owners");
    }
    if (grid_n < 2 || grid_n > 501) {
        throw std::invalid_argument("brute force grid must be in [2, 501]");
    }
    const double improve_tol = 1e-6;
    const std::size_t n = m.num_owners();
    const std::size_t levels = static_cast<std::size_t>(grid_n);
    const double step = 1.0 / static_cast<double>(grid_n - 1);
    const double demand = aggregate_demand(m, price);

    std::vector<Action> actions(n);
    double total = 0.0;

    // Per-owner net self-use value on the x grid with running argmax, so
    // the simplex scan is O(grid) per owner and still exact on the grid.
    std::vector<double> fx(levels);
    std::vector<double> best_val(levels);
    std::vector<std::size_t> best_idx(levels);

    int round = 0;
    const int max_rounds = 10000;
    bool moved = true;
    for (; round < max_rounds && moved; ++round) {
        moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& f = m.owners()[i].benefit;
            double others = total - actions[i].s;
            OwnerEnvironment env{price, m.cost(), epsilon, demand, others};

            for (std::size_t j = 0; j < levels; ++j) {
                double x = std::min(static_cast<double>(j) * step, 1.0);
                fx[j] = f.value(x) - m.cost() * x;
                if (j == 0 || fx[j] > best_val[j - 1]) {
                    best_val[j] = fx[j];
                    best_idx[j] = j;
                } else {
                    best_val[j] = best_val[j - 1];
                    best_idx[j] = best_idx[j - 1];
                }
            }
            double top_val = -std::numeric_limits<double>::infinity();
            std::size_t top_s = 0, top_x = 0;
            for (std::size_t j = 0; j < levels; ++j) {
                double s = std::min(static_cast<double>(j) * step, 1.0);
                double match = matching_factor(demand, others, s);
                double v = best_val[levels - 1 - j] +
                           env.price * (match + env.epsilon) * s - m.cost() * s;
                if (v > top_val) {
                    top_val = v;
                    top_s = j;
                    top_x = best_idx[levels - 1 - j];
                }
            }
            double cur = owner_utility(f, env, actions[i].x, actions[i].s);
            if (top_val > cur + improve_tol) {
                Action next{std::min(static_cast<double>(top_x) * step, 1.0),
                            std::min(static_cast<double>(top_s) * step, 1.0)};
                total += next.s - actions[i].s;
                actions[i] = next;
                moved = true;
            }
        }
    }
    if (moved) {
        throw OracleNonConvergenceError("grid best response did not settle within " +
                                        std::to_string(max_rounds) + " rounds");
    }

    EquilibriumState st;
    st.price = price;
    st.epsilon = epsilon;
    st.owner_actions = std::move(actions);
    st.iterations = round;
    st.converged = true;
    st.total_supply = 0.0;
    for (const auto& a : st.owner_actions) st.total_supply += a.s;
    st.renter_usages.resize(m.num_renters());
    st.total_demand = 0.0;
    for (std::size_t k = 0; k < m.num_renters(); ++k) {
        st.renter_usages[k] = renter_demand(m.renters()[k].benefit, price);
        st.total_demand += st.renter_usages[k];
    }
    st.effective_price =
        price * matching_factor(st.total_demand, st.total_supply, 0.0);
    return st;
}

}  // namespace sharemkt
