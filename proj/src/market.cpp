#include "sharemkt/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sharemkt/agents.hpp"
#include "sharemkt/errors.hpp"
#include "sharemkt/search.hpp"

namespace sharemkt {

namespace {

template <typename Agent>
std::vector<int> group_agents(const std::vector<Agent>& agents) {
    std::vector<int> group(agents.size(), -1);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        for (std::size_t g = 0; g < reps.size(); ++g) {
            if (agents[reps[g]].benefit == agents[i].benefit) {
                group[i] = static_cast<int>(g);
                break;
            }
        }
        if (group[i] < 0) {
            group[i] = static_cast<int>(reps.size());
            reps.push_back(i);
        }
    }
    return group;
}

}  // namespace

Market::Market(std::vector<Owner> owners, std::vector<Renter> renters, double cost,
               double deriv_bound)
    : owners_(std::move(owners)),
      renters_(std::move(renters)),
      cost_(cost),
      deriv_bound_(deriv_bound) {
    if (owners_.size() < 2) {
        throw std::invalid_argument("market requires at least two owners");
    }
    if (!(std::isfinite(cost_) && cost_ >= 0.0)) {
        throw std::invalid_argument("cost must be finite and >= 0");
    }
    if (!(std::isfinite(deriv_bound_) && deriv_bound_ > 0.0)) {
        throw std::invalid_argument("deriv_bound must be finite and > 0");
    }
    for (const auto& o : owners_) {
        if (o.benefit.deriv_at_zero_finite() &&
            o.benefit.deriv(0.0, DerivSide::Right) > deriv_bound_) {
            throw std::invalid_argument("owner marginal benefit at 0 exceeds deriv_bound");
        }
    }
    for (const auto& r : renters_) {
        if (r.benefit.deriv_at_zero_finite() &&
            r.benefit.deriv(0.0, DerivSide::Right) > deriv_bound_) {
            throw std::invalid_argument("renter marginal benefit at 0 exceeds deriv_bound");
        }
    }
    owner_group_ = group_agents(owners_);
    renter_group_ = group_agents(renters_);
    num_renter_groups_ = renter_group_.empty()
                             ? 0
                             : 1 + *std::max_element(renter_group_.begin(), renter_group_.end());
    std::vector<std::size_t> counts(static_cast<std::size_t>(num_renter_groups_), 0);
    std::vector<std::size_t> first(static_cast<std::size_t>(num_renter_groups_), 0);
    for (std::size_t k = 0; k < renter_group_.size(); ++k) {
        auto g = static_cast<std::size_t>(renter_group_[k]);
        if (counts[g] == 0) first[g] = k;
        ++counts[g];
    }
    for (int g = 0; g < num_renter_groups_; ++g) {
        renter_group_reps_.emplace_back(first[static_cast<std::size_t>(g)],
                                        counts[static_cast<std::size_t>(g)]);
    }
}

ValidationReport validate_market(const Market& m, const SolverOptions& opts) {
    ValidationReport rep;
    const double B = m.deriv_bound();

    // Assumption 1: some price earns p*D(p) >= c. Scan a grid and keep the
    // best witness.
    const int grid_n = 1000;
    double best_val = -1.0;
    double best_p = 0.0;
    for (int j = 0; j <= grid_n; ++j) {
        double p = B * static_cast<double>(j) / grid_n;
        double v = p * aggregate_demand(m, p);
        if (v > best_val) {
            best_val = v;
            best_p = p;
        }
    }
    rep.profitable = best_val >= m.cost();
    rep.profit_witness_price = best_p;
    rep.profit_witness_value = best_val;

    // Assumption 2: find p_o with D(p_o) ~= 1 (largest such price for step
    // demand) and compare owners' marginal self-use value at full usage.
    double hi = B;
    int doublings = 0;
    while (aggregate_demand(m, hi) > 1.0 && doublings < 16) {
        hi *= 2.0;
        ++doublings;
    }
    if (aggregate_demand(m, hi) > 1.0) {
        rep.demand_reaches_one = false;
        rep.no_monopoly = false;
        return rep;
    }
    if (aggregate_demand(m, 0.0) < 1.0) {
        rep.demand_reaches_one = false;
        rep.no_monopoly = false;
        return rep;
    }
    rep.demand_reaches_one = true;
    // sup{p : D(p) >= 1}; bisect on D(p) < 1.
    rep.p_o = bisect_predicate([&](double p) { return aggregate_demand(m, p) < 1.0; }, 0.0,
                               hi, opts.price_tol);

    rep.owner_below_po.resize(m.num_owners());
    for (std::size_t i = 0; i < m.num_owners(); ++i) {
        bool below = m.owners()[i].benefit.deriv_at_one() < rep.p_o;
        rep.owner_below_po[i] = below;
        if (below) ++rep.owners_below_po;
    }
    rep.all_owners_below_po = rep.owners_below_po == m.num_owners();
    // No owner can corner the market as the lone sharer as long as at least
    // two owners would still share at p_o.
    rep.no_monopoly = rep.owners_below_po >= 2;
    return rep;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << "assumption1(profitable)=" << (profitable ? "pass" : "FAIL")
       << " witness(p=" << profit_witness_price << ", pD=" << profit_witness_value << "); "
       << "assumption2(no_monopoly)=" << (no_monopoly ? "pass" : "FAIL");
    if (demand_reaches_one) {
        os << " p_o=" << p_o << " owners_below=" << owners_below_po << "/"
           << owner_below_po.size() << (all_owners_below_po ? "" : " (not all)");
    } else {
        os << " (demand never reaches 1)";
    }
    return os.str();
}

void require_valid(const Market& m, const SolverOptions& opts) {
    ValidationReport rep = validate_market(m, opts);
    if (!rep.ok()) {
        throw ValidationError("market failed validation: " + rep.summary());
    }
}

}  // namespace sharemkt
