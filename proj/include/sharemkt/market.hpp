#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sharemkt/benefit.hpp"
#include "sharemkt/options.hpp"

namespace sharemkt {

struct Owner {
    BenefitFunction benefit;  // self-usage benefit
};

struct Renter {
    BenefitFunction benefit;  // rental usage benefit
};

/// One owner's choice: self-use level x and share level s, with
/// x >= 0, s >= 0, x + s <= 1.
struct Action {
    double x = 0.0;
    double s = 0.0;
};

/// Immutable market scenario. Safe to share across threads; all solver
/// operations treat it as read-only.
class Market {
  public:
    Market(std::vector<Owner> owners, std::vector<Renter> renters, double cost,
           double deriv_bound);

    const std::vector<Owner>& owners() const { return owners_; }
    const std::vector<Renter>& renters() const { return renters_; }
    std::size_t num_owners() const { return owners_.size(); }
    std::size_t num_renters() const { return renters_.size(); }
    double cost() const { return cost_; }
    double deriv_bound() const { return deriv_bound_; }

    /// Group index per owner/renter; agents with identical benefit
    /// functions share a group. Used to deduplicate best-response work.
    const std::vector<int>& owner_group() const { return owner_group_; }
    const std::vector<int>& renter_group() const { return renter_group_; }
    int num_renter_groups() const { return num_renter_groups_; }

    /// Representative index and multiplicity per renter group.
    const std::vector<std::pair<std::size_t, std::size_t>>& renter_group_reps() const {
        return renter_group_reps_;
    }

  private:
    std::vector<Owner> owners_;
    std::vector<Renter> renters_;
    double cost_;
    double deriv_bound_;
    std::vector<int> owner_group_;
    std::vector<int> renter_group_;
    int num_renter_groups_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> renter_group_reps_;
};

/// Outcome of checking the two market assumptions:
///  1. profitability: some price p has p*D(p) >= c
///  2. no-monopoly: demand reaches 1 at some price p_o, and owners' marginal
///     self-use value at full usage stays below p_o (at least two owners
///     must satisfy it so that sharing never degenerates to one supplier;
///     per-owner results are recorded).
struct ValidationReport {
    bool profitable = false;
    double profit_witness_price = 0.0;
    double profit_witness_value = 0.0;

    bool no_monopoly = false;
    bool demand_reaches_one = false;
    double p_o = 0.0;                        // price with D(p_o) ~= 1
    std::vector<bool> owner_below_po;        // per owner: deriv at 1 < p_o
    std::size_t owners_below_po = 0;
    bool all_owners_below_po = false;

    bool ok() const { return profitable && no_monopoly; }
    std::string summary() const;
};

ValidationReport validate_market(const Market& m, const SolverOptions& opts = {});

/// Throws ValidationError if the market fails validation.
void require_valid(const Market& m, const SolverOptions& opts = {});

}  // namespace sharemkt
