#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sharemkt/equilibrium.hpp"
#include "sharemkt/io.hpp"
#include "sharemkt/pricing.hpp"
#include "test_support.hpp"

using namespace sharemkt;

TEST_CASE("example-2 equilibrium at the clearing price") {
    Market m = testing::example2_market();
    EquilibriumState st = solve_equilibrium(m, 2.6);
    CHECK(st.converged);
    for (const Action& a : st.owner_actions) {
        CHECK(a.x == doctest::Approx(0.7).epsilon(1e-6));
        CHECK(a.s == doctest::Approx(0.3).epsilon(1e-6));
    }
    CHECK(st.total_supply == doctest::Approx(30.0).epsilon(1e-4));
    CHECK(st.total_demand == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(st.max_residual <= 1e-6);
    CHECK(verify_equilibrium(m, st, 2001) <= 1e-4);
}

TEST_CASE("prices above the shutdown threshold yield zero supply") {
    Market m = testing::example2_market();
    // Demand vanishes at p = 3; beyond it sharing earns nothing.
    EquilibriumState st = solve_equilibrium(m, 3.5);
    CHECK(st.total_supply <= 1e-9);
    for (const Action& a : st.owner_actions) CHECK(a.s <= 1e-12);
    CHECK(verify_equilibrium(m, st, 201) <= 1e-8);
}

TEST_CASE("state bookkeeping invariants") {
    Market m = testing::random_quadratic_market(11, 8, 30, 0.05);
    EquilibriumState st = solve_equilibrium(m, 0.4);
    double s_sum = 0.0;
    for (const Action& a : st.owner_actions) {
        CHECK(a.x >= 0.0);
        CHECK(a.s >= 0.0);
        CHECK(a.x + a.s <= 1.0 + 1e-12);
        s_sum += a.s;
    }
    CHECK(st.total_supply == doctest::Approx(s_sum).epsilon(1e-9));
    double d_sum = 0.0;
    for (double y : st.renter_usages) {
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
        d_sum += y;
    }
    CHECK(st.total_demand == doctest::Approx(d_sum).epsilon(1e-9));
    double match = st.total_supply > 0.0
                       ? std::min(st.total_demand / st.total_supply, 1.0)
                       : (st.total_demand > 0.0 ? 1.0 : 0.0);
    CHECK(st.effective_price == doctest::Approx(st.price * match));
}

TEST_CASE("verify_equilibrium flags a forced deviation") {
    Market m = testing::example2_market();
    EquilibriumState st = solve_equilibrium(m, 2.6);
    // Force one owner out of the market; the scan must find the profit.
    st.total_supply -= st.owner_actions[0].s;
    st.owner_actions[0] = {0.7, 0.0};
    double improvement = verify_equilibrium(m, st, 501);
    CHECK(improvement > 0.1);
}

TEST_CASE("determinism: identical inputs give bit-identical states") {
    Market m = testing::random_quadratic_market(99, 20, 60, 0.1);
    EquilibriumState a = solve_equilibrium(m, 0.45);
    EquilibriumState b = solve_equilibrium(m, 0.45);
    CHECK(a.iterations == b.iterations);
    for (std::size_t i = 0; i < m.num_owners(); ++i) {
        CHECK(a.owner_actions[i].x == b.owner_actions[i].x);
        CHECK(a.owner_actions[i].s == b.owner_actions[i].s);
    }
    CHECK(a.total_supply == b.total_supply);
}

TEST_CASE("regime classification on example-2") {
    Market m = testing::example2_market();
    PriceAnalysis pa = analyze_structural_prices(m);
    CHECK(pa.p_c == doctest::Approx(2.6).epsilon(1e-4));
    CHECK(pa.p_upper == doctest::Approx(3.0).epsilon(1e-5));

    CHECK(classify_regime(m, 2.0, pa) == Regime::BelowClearing);
    CHECK(classify_regime(m, 2.6, pa) == Regime::Clearing);
    CHECK(classify_regime(m, 2.8, pa) == Regime::Oversupplied);
    CHECK(classify_regime(m, 5.0, pa) == Regime::Shutdown);
}

TEST_CASE("supply is nondecreasing below the clearing price") {
    Market m = testing::random_quadratic_market(7, 25, 75, 0.1);
    PriceAnalysis pa = analyze_structural_prices(m);
    double prev = -1.0;
    for (int j = 0; j <= 12; ++j) {
        double p = pa.p_c * j / 12.0;
        EquilibriumState st = solve_equilibrium(m, p);
        CHECK(st.total_supply >= prev - 1e-6);
        prev = st.total_supply;
    }
}

TEST_CASE("regime ordering of supply and demand") {
    Market m = testing::random_quadratic_market(21, 25, 75, 0.1);
    PriceAnalysis pa = analyze_structural_prices(m);
    for (int j = 1; j <= 6; ++j) {
        double p = (pa.p_c - 1e-4) * j / 6.0;
        EquilibriumState st = solve_equilibrium(m, p);
        CHECK(st.total_supply < st.total_demand + 1e-6);
    }
    for (int j = 0; j <= 6; ++j) {
        double p = pa.p_c + 1e-4 + (pa.p_upper - pa.p_c - 2e-4) * j / 6.0;
        EquilibriumState st = solve_equilibrium(m, p);
        CHECK(st.total_supply >= st.total_demand - 1e-4 * std::max(1.0, st.total_demand));
    }
    EquilibriumState st = solve_equilibrium(m, pa.p_upper * 1.05);
    CHECK(st.total_supply <= 1e-6);
}

TEST_CASE("at least two owners share on the oversupplied stretch") {
    Market m = testing::random_quadratic_market(42, 25, 75, 0.1);
    PriceAnalysis pa = analyze_structural_prices(m);
    for (int j = 0; j <= 5; ++j) {
        double p = pa.p_c + (pa.p_upper - pa.p_c) * j / 5.0;
        EquilibriumState st = solve_equilibrium(m, p);
        if (st.total_supply > 1e-6) {
            int sharers = 0;
            for (const Action& a : st.owner_actions) {
                if (a.s > 1e-9) ++sharers;
            }
            CHECK(sharers >= 2);
        }
    }
}

TEST_CASE("revenue-supply monotonicity above clearing") {
    Market m = testing::random_quadratic_market(314, 25, 75, 0.1);
    PriceAnalysis pa = analyze_structural_prices(m);
    struct Pt {
        double rev;
        double sup;
    };
    std::vector<Pt> pts;
    for (int j = 1; j <= 8; ++j) {
        double p = pa.p_c + (pa.p_upper - pa.p_c) * j / 9.0;
        EquilibriumState st = solve_equilibrium(m, p);
        if (st.total_supply > st.total_demand + 1e-6) {
            pts.push_back({p * st.total_demand, st.total_supply});
        }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (pts[i].rev >= pts[j].rev) {
                CHECK(pts[i].sup >= pts[j].sup - 1e-6);
            }
        }
    }
}

TEST_CASE("subsidy monotonicity of supply at fixed price") {
    Market m = testing::random_quadratic_market(2718, 20, 60, 0.1);
    PriceAnalysis pa = analyze_structural_prices(m);
    double p = 0.9 * pa.p_c;
    double prev = -1.0;
    for (int j = 0; j <= 8; ++j) {
        EquilibriumState st = solve_equilibrium(m, p, 0.1 * j);
        CHECK(st.total_supply >= prev - 1e-6);
        prev = st.total_supply;
    }
}

TEST_CASE("sweep of example-2 follows the closed-form supply") {
    Market m = testing::example2_market();
    std::vector<double> grid;
    for (int j = 0; j <= 20; ++j) grid.push_back(2.0 + 0.1 * j);
    std::vector<SweepRow> rows = sweep(m, grid);
    REQUIRE(rows.size() == 21);
    for (const auto& row : rows) {
        if (row.price <= 2.55) {
            // Below clearing every owner supplies (p-2)/2.
            CHECK(row.supply ==
                  doctest::Approx(100.0 * std::clamp((row.price - 2.0) / 2.0, 0.0, 1.0))
                      .epsilon(1e-3));
            CHECK(row.demand == doctest::Approx(225.0 - 75.0 * row.price).epsilon(1e-9));
        }
        if (row.price > 3.0 + 1e-6) {
            CHECK(row.supply <= 1e-9);
            CHECK(row.regime == "shutdown");
        }
        CHECK(row.converged);
    }
}

TEST_CASE("sweep on an empty-renter market has an all-zero demand column") {
    std::vector<Owner> os(3, Owner{BenefitFunction::quadratic(1.0, 2.0)});
    Market m(std::move(os), {}, 0.0, 10.0);
    std::vector<SweepRow> rows = sweep(m, {0.5, 1.0, 1.5});
    for (const auto& row : rows) {
        CHECK(row.demand == 0.0);
        CHECK(row.supply <= 1e-9);
    }
}

TEST_CASE("sweep rows are identical under parallel evaluation") {
    Market m = testing::example2_market(20, 30);
    std::vector<double> grid;
    for (int j = 0; j <= 10; ++j) grid.push_back(2.0 + 0.12 * j);
    std::vector<SweepRow> serial = sweep(m, grid, 0.0, {}, 1);
    std::vector<SweepRow> parallel = sweep(m, grid, 0.0, {}, 4);
    std::string csv_a = sweep_to_csv(serial);
    std::string csv_b = sweep_to_csv(parallel);
    CHECK(csv_a == csv_b);
}

TEST_CASE("sweep rejects bad grids") {
    Market m = testing::example2_market(5, 8);
    CHECK_THROWS_AS(sweep(m, {}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(m, {2.0, 1.0}), std::invalid_argument);
}
