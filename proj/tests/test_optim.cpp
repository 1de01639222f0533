#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/dual.hpp"
#include "core/market.hpp"
#include "core/optim.hpp"
#include "core/oracle.hpp"
#include "core/payoff.hpp"

using namespace chaosdual;

namespace {

DiscountedPayoffs constant_terminal(int paths, int steps, double terminal) {
    DiscountedPayoffs payoffs;
    payoffs.paths = paths;
    payoffs.steps = steps;
    payoffs.z.assign(static_cast<std::size_t>(paths) * (steps + 1), 0.0);
    for (int i = 0; i < paths; ++i) {
        payoffs.z[static_cast<std::size_t>(i) * (steps + 1) + steps] = terminal;
        payoffs.tau0.push_back(terminal > 0.0 ? steps : steps);
    }
    return payoffs;
}

struct Problem {
    MultiIndexBasis basis;
    PathBatch batch;
    DiscountedPayoffs payoffs;
};

Problem put_problem(int assets, int steps, int degree, int paths, std::uint64_t seed,
                    double strike) {
    const TimeGrid grid(1.0, steps);
    const auto params = BlackScholesParams::uniform(assets, 100.0, 0.2, 0.0, 0.0488, 0.0);
    auto batch = simulate_black_scholes(params, grid, paths, seed);
    PayoffSpec spec{PayoffKind::BasketPut, strike, {}};
    auto payoffs = evaluate_payoffs(spec, batch, params.rate, grid);
    return {MultiIndexBasis::enumerate(degree, steps, assets), std::move(batch), std::move(payoffs)};
}

} // namespace

TEST_CASE("european anchor") {
    SUBCASE("all-zero terminal payoff") {
        const auto payoffs = constant_terminal(50, 3, 0.0);
        CHECK(european_anchor(payoffs) == 0.0);
    }
    SUBCASE("constant terminal payoff") {
        const auto payoffs = constant_terminal(50, 3, 4.25);
        CHECK(european_anchor(payoffs) == doctest::Approx(4.25).epsilon(1e-15));
    }
    SUBCASE("monte carlo anchor matches the closed form") {
        // At-the-money one-year put, sigma = 0.2, r = 0.0488.
        const auto prob = put_problem(1, 4, 1, 100000, 2718, 100.0);
        const double anchor = european_anchor(prob.payoffs);
        const double closed = bs_european_put(100.0, 0.2, 0.0488, 0.0, 1.0, 100.0);

        double sq = 0.0;
        for (int i = 0; i < prob.payoffs.paths; ++i) {
            const double z = prob.payoffs.path(i)[4];
            sq += z * z;
        }
        const double var = sq / prob.payoffs.paths - anchor * anchor;
        const double se = std::sqrt(var / prob.payoffs.paths);
        CHECK(std::fabs(anchor - closed) <= 3.0 * se);
    }
}

TEST_CASE("polyak step") {
    CHECK(polyak_step(5.0, 5.0, 2.0) == 0.0);
    CHECK(polyak_step(6.0, 5.0, 4.0) == doctest::Approx(0.25));
    CHECK(polyak_step(4.0, 5.0, 4.0) == doctest::Approx(-0.25));  // uphill steps are the caller's problem
    CHECK_THROWS_AS(polyak_step(6.0, 5.0, 0.0), std::invalid_argument);
}

TEST_CASE("descent config validation") {
    DescentConfig config;
    CHECK_NOTHROW(config.validate());
    config.epsilon = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.epsilon = 1e-4;
    config.gamma0 = 1.5;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("first accepted value is the plain upper bound at lambda = 0") {
    const auto prob = put_problem(2, 3, 2, 2000, 99, 100.0);
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);
    const std::vector<double> zero(prob.basis.size(), 0.0);
    const double at_zero = objective.evaluate(zero).value;

    DescentConfig config;
    config.anchor = european_anchor(prob.payoffs);
    const auto result = minimize(objective, config);

    REQUIRE(!result.trace.accepted.empty());
    CHECK(result.trace.accepted.front().value == at_zero);
    CHECK(result.trace.accepted.front().step == 0.0);
    CHECK(result.value <= at_zero);
}

TEST_CASE("identically zero payoff stops immediately with price zero") {
    const auto prob = put_problem(1, 3, 2, 200, 100, 1e-6);  // strike far out of the money
    // Every payoff is zero: tau0 = n everywhere.
    for (int i = 0; i < prob.payoffs.paths; ++i) {
        for (double z : prob.payoffs.path(i)) {
            REQUIRE(z == 0.0);
        }
    }
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);
    DescentConfig config;
    config.anchor = european_anchor(prob.payoffs);
    const auto result = minimize(objective, config);
    CHECK(result.value == 0.0);
    CHECK(result.evaluations == 1);
    CHECK(result.iterations == 1);
    for (double v : result.lambda) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("accepted values decrease strictly and respect the european floor") {
    const auto prob = put_problem(2, 3, 2, 10000, 321, 100.0);
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);
    DescentConfig config;
    config.anchor = european_anchor(prob.payoffs);
    const auto result = minimize(objective, config);

    REQUIRE(result.trace.accepted.size() >= 2);
    for (std::size_t i = 1; i < result.trace.accepted.size(); ++i) {
        CHECK(result.trace.accepted[i].value < result.trace.accepted[i - 1].value);
    }
    CHECK(result.value >= config.anchor - 3.0 * result.std_error);
    CHECK(result.evaluations >= result.iterations);
    CHECK(result.value < result.trace.accepted.front().value);  // some progress happened
}

TEST_CASE("minimize is deterministic") {
    const auto prob = put_problem(2, 3, 2, 5000, 654, 100.0);
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);
    DescentConfig config;
    config.anchor = european_anchor(prob.payoffs);
    const auto a = minimize(objective, config);
    const auto b = minimize(objective, config);
    CHECK(a.value == b.value);
    CHECK(a.evaluations == b.evaluations);
    for (std::size_t e = 0; e < a.lambda.size(); ++e) {
        CHECK(a.lambda[e] == b.lambda[e]);
    }
}

TEST_CASE("degenerate heston prices like black-scholes through the whole pipeline") {
    // xi = 0 with v0 = theta freezes the variance: the contract is a plain
    // lognormal put with sigma = sqrt(v0). The Heston batch carries a second
    // Brownian component, so its basis is richer; the dual bound may only
    // tighten, up to Monte Carlo noise.
    const TimeGrid grid(1.0, 6);
    const int m = 20000;

    HestonParams heston{100.0, 0.03, 0.04, 2.0, 0.04, 0.0, -0.5};
    const auto hbatch = simulate_heston(heston, grid, m, 313);
    PayoffSpec spec{PayoffKind::BasketPut, 100.0, {}};
    const auto hpay = evaluate_payoffs(spec, hbatch, heston.rate, grid);
    const auto hbasis = MultiIndexBasis::enumerate(2, 6, 2);
    DualObjective hobj(hbasis, hbatch, hpay, 1);
    DescentConfig hcfg;
    hcfg.anchor = european_anchor(hpay);
    const auto hres = minimize(hobj, hcfg);

    const auto params = BlackScholesParams::uniform(1, 100.0, 0.2, 0.0, 0.03, 0.0);
    const auto bbatch = simulate_black_scholes(params, grid, m, 414);
    const auto bpay = evaluate_payoffs(spec, bbatch, params.rate, grid);
    const auto bbasis = MultiIndexBasis::enumerate(2, 6, 1);
    DualObjective bobj(bbasis, bbatch, bpay, 1);
    DescentConfig bcfg;
    bcfg.anchor = european_anchor(bpay);
    const auto bres = minimize(bobj, bcfg);

    const double combined =
        std::sqrt(hres.std_error * hres.std_error + bres.std_error * bres.std_error);
    CHECK(std::fabs(hres.value - bres.value) <= 5.0 * combined);
    CHECK(hres.value >= hcfg.anchor - 3.0 * hres.std_error);
}

TEST_CASE("max_iters caps the number of accepted steps") {
    const auto prob = put_problem(2, 3, 2, 5000, 654, 100.0);
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);
    DescentConfig config;
    config.anchor = european_anchor(prob.payoffs);
    config.max_iters = 3;
    const auto result = minimize(objective, config);
    CHECK(result.iterations <= 3);
}
