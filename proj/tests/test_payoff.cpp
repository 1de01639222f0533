#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/market.hpp"
#include "core/oracle.hpp"
#include "core/payoff.hpp"

using namespace chaosdual;

namespace {

// Batch with hand-picked spot paths (increments left at zero).
PathBatch fixed_batch(const std::vector<std::vector<double>>& spots_per_path, int assets) {
    const int m = static_cast<int>(spots_per_path.size());
    const int dates = static_cast<int>(spots_per_path[0].size()) / assets;
    PathBatch batch(m, dates - 1, assets, assets, 0);
    for (int i = 0; i < m; ++i) {
        auto dst = batch.mutable_spots(i);
        for (std::size_t s = 0; s < dst.size(); ++s) {
            dst[s] = spots_per_path[static_cast<std::size_t>(i)][s];
        }
    }
    return batch;
}

} // namespace

TEST_CASE("intrinsic values by payoff kind") {
    const TimeGrid grid(1.0, 1);

    SUBCASE("basket put at the money is worthless") {
        const auto batch = fixed_batch({{100.0, 100.0, 100.0, 100.0}}, 2);
        PayoffSpec spec{PayoffKind::BasketPut, 100.0, {0.5, 0.5}};
        const auto payoffs = evaluate_payoffs(spec, batch, 0.0, grid);
        CHECK(payoffs.path(0)[0] == 0.0);
        CHECK(payoffs.path(0)[1] == 0.0);
    }

    SUBCASE("geometric put at the money is worthless") {
        const auto batch = fixed_batch({{100.0, 100.0, 100.0, 100.0}}, 2);
        PayoffSpec spec{PayoffKind::GeometricPut, 100.0, {}};
        const auto payoffs = evaluate_payoffs(spec, batch, 0.0, grid);
        CHECK(payoffs.path(0)[0] == 0.0);
    }

    SUBCASE("min put pays strike minus the worst asset") {
        const auto batch = fixed_batch({{90.0, 120.0, 90.0, 120.0}}, 2);
        PayoffSpec spec{PayoffKind::MinPut, 100.0, {}};
        const auto payoffs = evaluate_payoffs(spec, batch, 0.0, grid);
        CHECK(payoffs.path(0)[0] == doctest::Approx(10.0));
    }

    SUBCASE("max call pays the best asset minus strike") {
        const auto batch = fixed_batch({{90.0, 120.0, 90.0, 120.0}}, 2);
        PayoffSpec spec{PayoffKind::MaxCall, 100.0, {}};
        const auto payoffs = evaluate_payoffs(spec, batch, 0.0, grid);
        CHECK(payoffs.path(0)[0] == doctest::Approx(20.0));
    }

    SUBCASE("default basket weights are 1/d") {
        const auto batch = fixed_batch({{80.0, 100.0, 80.0, 100.0}}, 2);
        PayoffSpec spec{PayoffKind::BasketPut, 100.0, {}};
        const auto payoffs = evaluate_payoffs(spec, batch, 0.0, grid);
        CHECK(payoffs.path(0)[0] == doctest::Approx(10.0));
    }
}

TEST_CASE("first in-the-money date") {
    const std::vector<double> never{0.0, 0.0, 0.0, 0.0};
    CHECK(first_in_the_money(never) == 3);

    const std::vector<double> immediately{5.0, 0.0, 0.0};
    CHECK(first_in_the_money(immediately) == 0);

    const std::vector<double> later{0.0, 0.0, 3.0, 1.0};
    CHECK(first_in_the_money(later) == 2);

    // Strictly positive is required; zero does not count.
    const std::vector<double> boundary{0.0, 0.0, 0.0, 2.0};
    CHECK(first_in_the_money(boundary) == 3);

    // Positive rescaling cannot move tau0.
    std::vector<double> scaled = later;
    for (double& v : scaled) {
        v *= 7.25;
    }
    CHECK(first_in_the_money(scaled) == first_in_the_money(later));
}

TEST_CASE("discounting is applied per date and decreases with maturity") {
    // Constant intrinsic value across dates: z must strictly decrease when r > 0.
    const auto batch = fixed_batch({{90.0, 90.0, 90.0, 90.0, 90.0}}, 1);
    const TimeGrid grid(2.0, 4);
    PayoffSpec spec{PayoffKind::BasketPut, 100.0, {}};
    const auto payoffs = evaluate_payoffs(spec, batch, 0.05, grid);
    const auto z = payoffs.path(0);
    CHECK(z[0] == doctest::Approx(10.0));
    for (int k = 1; k <= 4; ++k) {
        CHECK(z[static_cast<std::size_t>(k)] < z[static_cast<std::size_t>(k) - 1]);
        CHECK(z[static_cast<std::size_t>(k)] ==
              doctest::Approx(10.0 * std::exp(-0.05 * grid.date(k))));
    }
    CHECK(payoffs.tau0[0] == 0);
}

TEST_CASE("payoff validation") {
    const auto batch = fixed_batch({{100.0, 100.0}}, 1);
    const TimeGrid grid(1.0, 1);
    PayoffSpec bad_strike{PayoffKind::BasketPut, 0.0, {}};
    CHECK_THROWS_AS(evaluate_payoffs(bad_strike, batch, 0.0, grid), std::invalid_argument);

    PayoffSpec bad_weights{PayoffKind::BasketPut, 100.0, {0.5, 0.5}};
    CHECK_THROWS_AS(evaluate_payoffs(bad_weights, batch, 0.0, grid), std::invalid_argument);

    PayoffSpec weights_on_min{PayoffKind::MinPut, 100.0, {1.0}};
    CHECK_THROWS_AS(evaluate_payoffs(weights_on_min, batch, 0.0, grid), std::invalid_argument);
}

TEST_CASE("geometric payoff matches its 1-d reduction in law") {
    // Terminal-payoff moments of the d = 2 geometric put against the reduced
    // single-asset put, simulated independently.
    const TimeGrid grid(1.0, 9);
    const auto params = BlackScholesParams::uniform(2, 100.0, 0.2, 0.0, 0.0488, 0.0);
    const auto reduced = geometric_reduction(params);

    const int m = 100000;
    const auto batch_d = simulate_black_scholes(params, grid, m, 2001);
    PayoffSpec spec{PayoffKind::GeometricPut, 100.0, {}};
    const auto payoffs_d = evaluate_payoffs(spec, batch_d, params.rate, grid);

    BlackScholesParams one;
    one.spot = {reduced.spot};
    one.vol = {reduced.vol};
    one.div = {reduced.div};
    one.rate = params.rate;
    one.corr = 0.0;
    const auto batch_1 = simulate_black_scholes(one, grid, m, 2002);
    const auto payoffs_1 = evaluate_payoffs(spec, batch_1, one.rate, grid);

    for (int moment = 1; moment <= 2; ++moment) {
        double sum_d = 0.0;
        double sq_d = 0.0;
        double sum_1 = 0.0;
        double sq_1 = 0.0;
        for (int i = 0; i < m; ++i) {
            const double zd = std::pow(payoffs_d.path(i)[9], moment);
            const double z1 = std::pow(payoffs_1.path(i)[9], moment);
            sum_d += zd;
            sq_d += zd * zd;
            sum_1 += z1;
            sq_1 += z1 * z1;
        }
        const double mean_d = sum_d / m;
        const double mean_1 = sum_1 / m;
        const double var_d = std::max(sq_d / m - mean_d * mean_d, 0.0);
        const double var_1 = std::max(sq_1 / m - mean_1 * mean_1, 0.0);
        const double combined = std::sqrt((var_d + var_1) / m);
        CAPTURE(moment);
        CHECK(std::fabs(mean_d - mean_1) <= 4.0 * combined);
    }
}
