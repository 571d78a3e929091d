#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sharemkt/agents.hpp"
#include "sharemkt/scenario.hpp"
#include "test_support.hpp"

using namespace sharemkt;

namespace {

/// Independent oracle: maximize g(y) - p*y by scanning a dense grid.
double grid_renter_demand(const BenefitFunction& g, double price, int grid_n) {
    double best_y = 0.0;
    double best_v = g.value(0.0);
    for (int j = 1; j < grid_n; ++j) {
        double y = static_cast<double>(j) / (grid_n - 1);
        double v = g.value(std::min(y, 1.0)) - price * y;
        if (v > best_v) {
            best_v = v;
            best_y = y;
        }
    }
    return best_y;
}

/// Independent oracle: exhaustive simplex-grid maximization of the owner
/// objective. The x-part and s-part only couple through x <= 1-s, so the
/// full 2-D scan reduces to a prefix maximum without changing its result.
Action grid_owner_best_response(const BenefitFunction& f, const OwnerEnvironment& env,
                                int grid_n, double* value = nullptr) {
    const double step = 1.0 / (grid_n - 1);
    std::vector<double> best_val(grid_n);
    std::vector<int> best_idx(grid_n);
    for (int j = 0; j < grid_n; ++j) {
        double x = std::min(j * step, 1.0);
        double v = f.value(x) - env.cost * x;
        if (j == 0 || v > best_val[j - 1]) {
            best_val[j] = v;
            best_idx[j] = j;
        } else {
            best_val[j] = best_val[j - 1];
            best_idx[j] = best_idx[j - 1];
        }
    }
    double top = -1e300;
    Action act;
    for (int j = 0; j < grid_n; ++j) {
        double s = std::min(j * step, 1.0);
        double match = matching_factor(env.total_demand, env.others_supply, s);
        double v = best_val[grid_n - 1 - j] + env.price * (match + env.epsilon) * s -
                   env.cost * s;
        if (v > top) {
            top = v;
            act = Action{std::min(best_idx[grid_n - 1 - j] * step, 1.0), s};
        }
    }
    if (value) *value = top;
    return act;
}

}  // namespace

TEST_CASE("renter demand closed forms") {
    CHECK(renter_demand(BenefitFunction::quadratic(1.0, 3.0), 2.6) ==
          doctest::Approx(0.2).epsilon(1e-12));
    // Marginal benefit at zero below the price: no participation.
    CHECK(renter_demand(BenefitFunction::quadratic(1.0, 3.0), 3.5) == 0.0);
    CHECK(renter_demand(BenefitFunction::linear(2.0), 2.0) == 0.0);
    CHECK(renter_demand(BenefitFunction::linear(2.0), 1.99) == 1.0);
}

TEST_CASE("entropy renter demand clamps and matches grid search") {
    auto g = BenefitFunction::entropy(19190.0, 0.0832, 1919.0);
    double y = renter_demand(g, 12.0);
    CHECK(y == 1.0);  // (19190/1919) e^{-0.0832*12} ~ 3.68, clamped
    double y_grid = grid_renter_demand(g, 12.0, 1000001);
    CHECK(std::abs(y - y_grid) <= 2e-6);

    // Interior price region
    double p = 30.0;
    double closed = (19190.0 / 1919.0) * std::exp(-0.0832 * p);
    CHECK(renter_demand(g, p) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(std::abs(renter_demand(g, p) - grid_renter_demand(g, p, 1000001)) <= 2e-6);
}

TEST_CASE("renter demand is nonincreasing in price") {
    std::uint64_t rng = 555;
    for (int t = 0; t < 25; ++t) {
        auto g = testing::random_benefit(rng);
        double prev = renter_demand(g, 0.0);
        for (int j = 1; j <= 40; ++j) {
            double p = 2.0 * j / 40.0;
            double y = renter_demand(g, p);
            CHECK(y <= prev + 1e-9);
            prev = y;
        }
    }
}

TEST_CASE("aggregate demand: example-2 closed form and bound") {
    Market m = testing::example2_market();
    CHECK(aggregate_demand(m, 2.6) == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(aggregate_demand(m, 10.0) == 0.0);  // price at the derivative bound
    CHECK(aggregate_demand(m, 3.0) == 0.0);
}

TEST_CASE("aggregate demand equals per-renter grid maxima summed") {
    Market m = testing::random_quadratic_market(2024, 5, 40, 0.1);
    for (double p : {0.05, 0.3, 0.7}) {
        double direct = 0.0;
        for (const auto& r : m.renters()) direct += grid_renter_demand(r.benefit, p, 100001);
        CHECK(aggregate_demand(m, p) == doctest::Approx(direct).epsilon(1e-4));
    }
}

TEST_CASE("owner best response reproduces the example-2 clearing action") {
    auto f = BenefitFunction::quadratic(1.0, 4.0);
    OwnerEnvironment env{2.6, 0.0, 0.0, 30.0, 29.7};
    Action a = owner_best_response(f, env);
    CHECK(a.x == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(a.s == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("zero price with positive cost shuts sharing down") {
    auto f = BenefitFunction::quadratic(1.0, 3.0);
    OwnerEnvironment env{0.0, 0.2, 0.0, 10.0, 1.0};
    Action a = owner_best_response(f, env);
    CHECK(a.s == 0.0);
    // x maximizes f(x) - c x: (3 - 0.2)/2 = 1.4 -> clamped to 1.
    CHECK(a.x == doctest::Approx(1.0));
}

TEST_CASE("no demand, no subsidy, positive cost: no sharing") {
    std::uint64_t rng = 31;
    for (int t = 0; t < 20; ++t) {
        auto f = testing::random_benefit(rng);
        OwnerEnvironment env{uniform_draw(rng, 0.1, 2.0), 0.05, 0.0, 0.0,
                             uniform_draw(rng, 0.0, 2.0)};
        Action a = owner_best_response(f, env);
        CHECK(a.s <= 1e-9);
    }
}

TEST_CASE("owner best response matches the simplex grid oracle") {
    std::uint64_t rng = 777;
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        auto f = testing::random_benefit(rng);
        OwnerEnvironment env{uniform_draw(rng, 0.0, 2.0), uniform_draw(rng, 0.0, 0.3),
                             uniform_draw(rng, 0.0, 0.5), uniform_draw(rng, 0.0, 3.0),
                             uniform_draw(rng, 0.0, 3.0)};
        double grid_value = 0.0;
        grid_owner_best_response(f, env, 2001, &grid_value);
        Action a = owner_best_response(f, env);
        double value = owner_utility(f, env, a.x, a.s);
        CHECK(value >= grid_value - 1e-3);
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("clearing conditions with cost below price fill the budget") {
    std::uint64_t rng = 808;
    for (int t = 0; t < 50; ++t) {
        auto f = testing::random_benefit(rng);
        double c = uniform_draw(rng, 0.0, 0.2);
        double p = c + uniform_draw(rng, 0.1, 1.5);
        double others = uniform_draw(rng, 0.0, 3.0);
        // Demand high enough that the marginal shared unit always matches.
        OwnerEnvironment env{p, c, 0.0, others + 2.0, others};
        Action a = owner_best_response(f, env);
        CHECK(a.x + a.s == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("gradient residual at the example-2 equilibrium point is zero") {
    auto f = BenefitFunction::quadratic(1.0, 4.0);
    OwnerEnvironment env{2.6, 0.0, 0.0, 30.0, 29.7};
    CHECK(gradient_residual(f, env, 0.7, 0.3) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("gradient residual equals the constructed violation gap") {
    // Oversupplied: marginal share revenue p D S_others / S^2 exceeds the
    // left derivative of f at x.
    auto f = BenefitFunction::quadratic(1.0, 1.0);
    OwnerEnvironment env{2.0, 0.0, 0.0, 1.0, 2.0};  // S = 2.5 > D = 1
    double x = 0.4, s = 0.5;
    double dq = 2.0 * 1.0 * 2.0 / (2.5 * 2.5);
    double fminus = 1.0 - 2.0 * 0.4;
    CHECK(dq > fminus);
    CHECK(gradient_residual(f, env, x, s) == doctest::Approx(dq - fminus).epsilon(1e-12));
}

TEST_CASE("gradient residual at grid optima stays small") {
    std::uint64_t rng = 660;
    double worst = 0.0;
    for (int t = 0; t < 60; ++t) {
        auto f = BenefitFunction::quadratic(uniform_draw(rng, 0.1, 1.2),
                                            uniform_draw(rng, 0.1, 1.0));
        OwnerEnvironment env{uniform_draw(rng, 0.1, 1.0), uniform_draw(rng, 0.0, 0.1),
                             0.0, uniform_draw(rng, 0.5, 3.0), uniform_draw(rng, 0.5, 3.0)};
        Action a = grid_owner_best_response(f, env, 20001);
        worst = std::max(worst, gradient_residual(f, env, a.x, a.s));
    }
    CHECK(worst <= 1e-4);
}
