#include <doctest.h>

#include <cmath>

#include "sharemkt/errors.hpp"
#include "sharemkt/pricing.hpp"
#include "test_support.hpp"

using namespace sharemkt;

TEST_CASE("revenue on example-2") {
    Market m = testing::example2_market();
    CHECK(revenue(m, 2.6) == doctest::Approx(78.0).epsilon(1e-3));
    // Demand is zero from p = 3 on, so no transactions happen.
    CHECK(revenue(m, 3.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(revenue(m, 3.4) == 0.0);
}

TEST_CASE("welfare on the table-1 market at a clearing price") {
    Market m = testing::table1_market();  // delta = c = 0.01
    // One unit trades; owners 5 and 2 self-use: W = 11 + delta - 3c.
    CHECK(welfare(m, 1.75) == doctest::Approx(10.98).epsilon(1e-9));
}

TEST_CASE("welfare on the table-1 market at the revenue price point") {
    Market m = testing::table1_market();
    // At p = 4.005 the two low-value owners split sharing interiorly:
    // p*s3/S^2 = 2 and p*s2/S^2 = 1 give s3 = 2*s2, S = 3*s2, so
    // s2 = p/9, s3 = 2p/9, and welfare
    // 5 + 2*(1 - s2) + (1 - s3) + (4+delta) - 3c.
    double p = 4.005;
    double s2 = p / 9.0;
    double s3 = 2.0 * p / 9.0;
    double expected = 5.0 + 2.0 * (1.0 - s2) + (1.0 - s3) + 4.01 - 0.03;
    EquilibriumState st = solve_equilibrium(m, p);
    CHECK(st.owner_actions[1].s == doctest::Approx(s2).epsilon(1e-5));
    CHECK(st.owner_actions[2].s == doctest::Approx(s3).epsilon(1e-5));
    CHECK(welfare(m, p) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("welfare is zero when no participation is profitable") {
    std::vector<Owner> os(3, Owner{BenefitFunction::quadratic(1.0, 0.5)});
    std::vector<Renter> rs(4, Renter{BenefitFunction::quadratic(1.0, 0.5)});
    Market m(std::move(os), std::move(rs), 2.0, 10.0);  // cost above every slope
    for (double p : {0.1, 0.5, 1.0, 4.0}) {
        CHECK(welfare(m, p) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("p_upper on example-2 and failure cases") {
    Market m = testing::example2_market();
    bool capped = true;
    CHECK(find_p_upper(m, {}, &capped) == doctest::Approx(3.0).epsilon(1e-5));
    CHECK_FALSE(capped);

    std::vector<Owner> os(2, Owner{BenefitFunction::quadratic(1.0, 1.0)});
    std::vector<Renter> rs(3, Renter{BenefitFunction::quadratic(1.0, 1.0)});
    Market poor(std::move(os), std::move(rs), 50.0, 10.0);
    CHECK_THROWS_AS(find_p_upper(poor), NoRootError);
}

TEST_CASE("p_upper root residual on random markets with cost") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        Market m = testing::random_quadratic_market(seed, 20, 60, 0.1);
        double p = find_p_upper(m);
        CHECK(std::abs(p * aggregate_demand(m, p) - 0.1) <= 1e-4);
    }
}

TEST_CASE("entropy demand never vanishes: p_upper capped at the bound") {
    Market m = testing::didi_market(300);
    bool capped = false;
    CHECK(find_p_upper(m, {}, &capped) == 100.0);
    CHECK(capped);
}

TEST_CASE("clearing price of example-2, subsidized and not") {
    Market m = testing::example2_market();
    CHECK(find_p_c(m) == doctest::Approx(2.6).epsilon(1e-4));
    CHECK(find_p_c(m, 3.0 / 7.0) == doctest::Approx(17.0 / 7.0).epsilon(1e-4));
}

TEST_CASE("clearing price of the table-1 market") {
    Market m = testing::table1_market();
    CHECK(find_p_c(m) == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("potential price") {
    Market m = testing::example2_market();
    CHECK(find_p_potential(m) == doctest::Approx(1.5).epsilon(1e-4));

    Market didi = testing::didi_market(1100);
    CHECK(find_p_potential(didi) == doctest::Approx(1.0 / 0.0832).epsilon(1e-3));

    // Single-renter step demand: potential revenue climbs right up to the
    // renter's value.
    std::vector<Owner> os(2, Owner{BenefitFunction::linear(0.5)});
    std::vector<Renter> rs(1, Renter{BenefitFunction::linear(4.01)});
    Market step(std::move(os), std::move(rs), 0.01, 10.0);
    CHECK(find_p_potential(step) == doctest::Approx(4.01).epsilon(1e-3));
}

TEST_CASE("optimal revenue price on example-2 takes the clearing branch") {
    Market m = testing::example2_market();
    auto [p_r, r] = optimize_revenue(m);
    CHECK(p_r == doctest::Approx(2.6).epsilon(1e-4));
    CHECK(r == doctest::Approx(78.0).epsilon(1e-3));
}

TEST_CASE("didi-style shortage markets price at clearing") {
    Market m = testing::didi_market(1100);
    double p_c = find_p_c(m);
    double p_potential = find_p_potential(m);
    CHECK(p_potential < p_c);
    auto [p_r, r] = optimize_revenue(m);
    CHECK(p_r == doctest::Approx(p_c).epsilon(1e-9));
    CHECK(r > 0.0);
}

TEST_CASE("abundant supply separates the two optimal prices") {
    // Many owners per renter and a real cost: revenue pricing runs above
    // welfare pricing.
    Market m = testing::random_quadratic_market(910, 100, 500, 0.1);
    PriceAnalysis pa = analyze_prices(m);
    CHECK(pa.p_r > pa.p_sw + 1e-4);
    CHECK(pa.p_sw == doctest::Approx(pa.p_c).epsilon(1e-12));
    CHECK(pa.welfare_at_p_sw >= pa.welfare_at_p_r - 1e-9);
}

TEST_CASE("optimal welfare price equals the clearing price") {
    Market m = testing::example2_market();
    auto [p_sw, w] = optimize_welfare(m);
    CHECK(p_sw == doctest::Approx(2.6).epsilon(1e-4));
    CHECK(w > 0.0);

    Market t1 = testing::table1_market();
    auto [p_sw1, w1] = optimize_welfare(t1);
    CHECK(p_sw1 == doctest::Approx(1.5).epsilon(2e-3));
    CHECK(w1 == doctest::Approx(10.98).epsilon(1e-6));
}

TEST_CASE("gap bounds vanish when both prices coincide") {
    Market m = testing::example2_market();
    GapBound gb = welfare_gap_bounds(m, 2.6, 2.6);
    CHECK(gb.actual_gap == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gb.bound_general == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gb.bound_special == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gb.special_valid);
    CHECK(gb.bound_interpretable == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("theorem-3/4 ordering on random quadratic markets") {
    for (std::uint64_t seed : {11ull, 22ull, 33ull, 44ull, 55ull}) {
        Market m = testing::random_quadratic_market(seed, 30, 90, 0.1);
        PriceAnalysis pa = analyze_prices(m);
        CHECK(pa.p_r >= pa.p_sw - 1e-6);

        EquilibriumState sw = solve_equilibrium(m, pa.p_sw);
        EquilibriumState r = solve_equilibrium(m, pa.p_r);
        double qos_sw = sw.total_supply > 0.0 ? sw.total_demand / sw.total_supply : 0.0;
        double qos_r = r.total_supply > 0.0 ? r.total_demand / r.total_supply : 0.0;
        CHECK(qos_sw >= qos_r - 1e-6);
        CHECK(r.total_supply >= r.total_demand - 1e-4 * std::max(1.0, r.total_demand));

        GapBound gb = gap_bounds_from_states(m, sw, r);
        CHECK(gb.actual_gap >= -1e-9);
        CHECK(gb.actual_gap <= gb.bound_general + 1e-6);
        CHECK(gb.bound_general <= gb.bound_interpretable + 1e-6);
    }
}
