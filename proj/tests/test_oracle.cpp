#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/market.hpp"
#include "core/oracle.hpp"

using namespace chaosdual;

namespace {

// High-precision standard normal CDF by Simpson quadrature of the density,
// independent of the erfc-based implementation under test.
double normal_cdf_quadrature(double x) {
    const double lo = -12.0;
    if (x <= lo) {
        return 0.0;
    }
    const int intervals = 20000;  // even
    const double h = (x - lo) / intervals;
    auto density = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    double sum = density(lo) + density(x);
    for (int i = 1; i < intervals; ++i) {
        sum += density(lo + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    }
    return sum * h / 3.0;
}

double put_by_quadrature(double spot, double vol, double rate, double div, double maturity,
                         double strike) {
    const double sig_sqrt_t = vol * std::sqrt(maturity);
    const double d1 =
        (std::log(spot / strike) + (rate - div + 0.5 * vol * vol) * maturity) / sig_sqrt_t;
    const double d2 = d1 - sig_sqrt_t;
    return strike * std::exp(-rate * maturity) * normal_cdf_quadrature(-d2) -
           spot * std::exp(-div * maturity) * normal_cdf_quadrature(-d1);
}

} // namespace

TEST_CASE("geometric reduction reproduces the known parameter triples") {
    SUBCASE("d = 2, sigma = 0.2, rho = 0") {
        const auto reduced =
            geometric_reduction(BlackScholesParams::uniform(2, 100.0, 0.2, 0.0, 0.0488, 0.0));
        CHECK(reduced.spot == doctest::Approx(100.0).epsilon(1e-12));
        CHECK(reduced.vol == doctest::Approx(0.2 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(reduced.div == doctest::Approx(0.01).epsilon(1e-12));
        // Displayed-precision match: 0.14 and 0.01.
        CHECK(std::fabs(reduced.vol - 0.14) <= 5e-3);
        CHECK(std::fabs(reduced.div - 0.01) <= 5e-4);
    }
    SUBCASE("d = 10, sigma = 0.3, rho = 0.1") {
        const auto reduced =
            geometric_reduction(BlackScholesParams::uniform(10, 100.0, 0.3, 0.0, 0.0488, 0.1));
        CHECK(reduced.vol == doctest::Approx(std::sqrt(1.71) / 10.0).epsilon(1e-12));
        CHECK(reduced.div == doctest::Approx(0.03645).epsilon(1e-12));
        CHECK(std::fabs(reduced.vol - 0.131) <= 5e-4);
        CHECK(std::fabs(reduced.div - 0.036) <= 5e-4);
    }
    SUBCASE("d = 40, sigma = 0.3, rho = 0.1") {
        const auto reduced =
            geometric_reduction(BlackScholesParams::uniform(40, 100.0, 0.3, 0.0, 0.0488, 0.1));
        CHECK(reduced.vol == doctest::Approx(0.105).epsilon(1e-12));
        CHECK(reduced.div == doctest::Approx(0.0394875).epsilon(1e-12));
        CHECK(std::fabs(reduced.vol - 0.105) <= 5e-4);
        CHECK(std::fabs(reduced.div - 0.039) <= 5e-4);
    }
    SUBCASE("one asset reduces to itself") {
        const auto reduced =
            geometric_reduction(BlackScholesParams::uniform(1, 95.0, 0.25, 0.02, 0.05, 0.0));
        CHECK(reduced.spot == doctest::Approx(95.0));
        CHECK(reduced.vol == doctest::Approx(0.25));
        CHECK(reduced.div == doctest::Approx(0.02).epsilon(1e-12));
    }
}

TEST_CASE("european put closed form") {
    SUBCASE("frozen at-the-money value") {
        const double v = bs_european_put(100.0, 0.2, 0.0488, 0.0, 1.0, 100.0);
        CHECK(v == doctest::Approx(5.6239599833509934).epsilon(1e-12));
    }
    SUBCASE("agrees with an independent quadrature CDF") {
        for (double strike : {60.0, 100.0, 140.0}) {
            const double lhs = bs_european_put(100.0, 0.25, 0.03, 0.01, 2.0, strike);
            const double rhs = put_by_quadrature(100.0, 0.25, 0.03, 0.01, 2.0, strike);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
    SUBCASE("vanishing strike is worthless") {
        CHECK(bs_european_put(100.0, 0.2, 0.05, 0.0, 1.0, 1e-12) <= 1e-12);
        CHECK(bs_european_put(100.0, 0.2, 0.05, 0.0, 1.0, 0.0) == 0.0);
    }
    SUBCASE("near-zero volatility at the forward-money boundary") {
        const double strike = 100.0 * std::exp(0.05);
        const double v = bs_european_put(100.0, 1e-4, 0.05, 0.0, 1.0, strike);
        CHECK(v >= 0.0);
        CHECK(v < 0.01);
    }
    SUBCASE("invalid inputs rejected") {
        CHECK_THROWS_AS(bs_european_put(100.0, 0.0, 0.05, 0.0, 1.0, 100.0), std::invalid_argument);
        CHECK_THROWS_AS(bs_european_put(100.0, 0.2, 0.05, 0.0, 0.0, 100.0), std::invalid_argument);
    }
}

TEST_CASE("monte carlo european geometric put matches the reduced closed form") {
    const TimeGrid grid(1.0, 9);
    const auto params = BlackScholesParams::uniform(2, 100.0, 0.2, 0.0, 0.0488, 0.0);
    const auto reduced = geometric_reduction(params);
    const double closed =
        bs_european_put(reduced.spot, reduced.vol, params.rate, reduced.div, 1.0, 100.0);

    const int m = 100000;
    const auto batch = simulate_black_scholes(params, grid, m, 3003);
    double sum = 0.0;
    double sum_sq = 0.0;
    const double df = std::exp(-params.rate * grid.maturity);
    for (int i = 0; i < m; ++i) {
        double log_geo = 0.0;
        for (int j = 0; j < 2; ++j) {
            log_geo += std::log(batch.spot(i, grid.steps, j));
        }
        const double z = df * std::max(100.0 - std::exp(0.5 * log_geo), 0.0);
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / m;
    const double se = std::sqrt(std::max(sum_sq / m - mean * mean, 0.0) / m);
    CHECK(std::fabs(mean - closed) <= 4.0 * se);
}

TEST_CASE("binomial tree") {
    const TimeGrid grid(1.0, 9);

    SUBCASE("deep out-of-the-money with tiny volatility prices to zero") {
        const ReducedParams reduced{100.0, 0.005, 0.0};
        const double v = binomial_put(reduced, 0.0488, 80.0, grid, 9000, ExerciseStyle::Bermudan);
        CHECK(v >= 0.0);
        CHECK(v < 1e-10);
    }

    SUBCASE("misaligned tree steps are rejected") {
        const ReducedParams reduced{100.0, 0.14, 0.01};
        CHECK_THROWS_AS(binomial_put(reduced, 0.0488, 100.0, grid, 9001, ExerciseStyle::Bermudan),
                        std::invalid_argument);
        CHECK_THROWS_AS(binomial_put(reduced, 0.0488, 100.0, grid, 0, ExerciseStyle::Bermudan),
                        std::invalid_argument);
    }

    SUBCASE("degenerate branch probability is a numeric error") {
        const ReducedParams reduced{100.0, 1e-9, 0.0};
        CHECK_THROWS_AS(binomial_put(reduced, 0.0488, 80.0, grid, 9000, ExerciseStyle::Bermudan),
                        NumericError);
    }

    SUBCASE("bermudan never exceeds american") {
        const ReducedParams reduced{100.0, 0.2, 0.015};
        const double bermudan =
            binomial_put(reduced, 0.0488, 100.0, grid, 1800, ExerciseStyle::Bermudan);
        const double american =
            binomial_put(reduced, 0.0488, 100.0, grid, 1800, ExerciseStyle::American);
        CHECK(bermudan <= american + 1e-12);
        CHECK(bermudan > 0.0);
    }

    SUBCASE("doubling the steps moves the price by less than 0.005") {
        const auto reduced =
            geometric_reduction(BlackScholesParams::uniform(2, 100.0, 0.2, 0.0, 0.0488, 0.0));
        const double coarse =
            binomial_put(reduced, 0.0488, 100.0, grid, 9000, ExerciseStyle::Bermudan);
        const double fine =
            binomial_put(reduced, 0.0488, 100.0, grid, 18000, ExerciseStyle::Bermudan);
        CHECK(std::fabs(coarse - fine) < 0.005);
    }

    SUBCASE("reduced 2-asset contract prices near 4.20") {
        // The quoted reference is an American-exercise tree value; the
        // 9-date Bermudan contract itself is worth about 0.05 less.
        const auto reduced =
            geometric_reduction(BlackScholesParams::uniform(2, 100.0, 0.2, 0.0, 0.0488, 0.0));
        const double american =
            binomial_put(reduced, 0.0488, 100.0, grid, 9000, ExerciseStyle::American);
        CHECK(std::fabs(american - 4.20) <= 0.02);
        const double bermudan =
            binomial_put(reduced, 0.0488, 100.0, grid, 9000, ExerciseStyle::Bermudan);
        CHECK(bermudan == doctest::Approx(4.1548).epsilon(2e-3));
    }

    SUBCASE("reduced 40-asset contract prices near 3.69") {
        const auto reduced =
            geometric_reduction(BlackScholesParams::uniform(40, 100.0, 0.3, 0.0, 0.0488, 0.1));
        const double american =
            binomial_put(reduced, 0.0488, 100.0, grid, 9000, ExerciseStyle::American);
        CHECK(std::fabs(american - 3.69) <= 0.02);
        const double bermudan =
            binomial_put(reduced, 0.0488, 100.0, grid, 9000, ExerciseStyle::Bermudan);
        CHECK(std::fabs(bermudan - 3.69) <= 0.02);
    }
}
