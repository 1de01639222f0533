#include "core/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace chaosdual {

ReducedParams geometric_reduction(const BlackScholesParams& params) {
    params.validate();
    const int d = params.assets();
    const double inv_d = 1.0 / d;

    double log_spot = 0.0;
    double quad = 0.0;
    double div_vol = 0.0;
    for (int i = 0; i < d; ++i) {
        const double si = params.vol[static_cast<std::size_t>(i)];
        log_spot += std::log(params.spot[static_cast<std::size_t>(i)]);
        div_vol += params.div[static_cast<std::size_t>(i)] + 0.5 * si * si;
        for (int j = 0; j < d; ++j) {
            const double gamma_ij = (i == j) ? 1.0 : params.corr;
            quad += si * params.vol[static_cast<std::size_t>(j)] * gamma_ij;
        }
    }

    ReducedParams out;
    out.spot = std::exp(log_spot * inv_d);
    out.vol = inv_d * std::sqrt(quad);
    out.div = inv_d * div_vol - 0.5 * out.vol * out.vol;
    return out;
}

namespace {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

} // namespace

double bs_european_put(double spot, double vol, double rate, double div,
                       double maturity, double strike) {
    if (!(vol > 0.0) || !(maturity > 0.0)) {
        throw std::invalid_argument("bs_european_put: vol and maturity must be > 0");
    }
    if (strike <= 0.0) {
        return 0.0;
    }
    const double sig_sqrt_t = vol * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + (rate - div + 0.5 * vol * vol) * maturity) / sig_sqrt_t;
    const double d2 = d1 - sig_sqrt_t;
    return strike * std::exp(-rate * maturity) * normal_cdf(-d2) -
           spot * std::exp(-div * maturity) * normal_cdf(-d1);
}

double binomial_put(const ReducedParams& reduced, double rate, double strike,
                    const TimeGrid& grid, int tree_steps, ExerciseStyle style) {
    if (!(reduced.vol > 0.0) || !(reduced.spot > 0.0)) {
        throw std::invalid_argument("binomial_put: reduced vol and spot must be > 0");
    }
    if (tree_steps < 1 || tree_steps % grid.steps != 0) {
        throw std::invalid_argument("binomial_put: tree_steps (" + std::to_string(tree_steps) +
                                    ") must be a positive multiple of the grid steps (" +
                                    std::to_string(grid.steps) + ")");
    }

    const double dt = grid.maturity / tree_steps;
    const double up = std::exp(reduced.vol * std::sqrt(dt));
    const double down = 1.0 / up;
    const double growth = std::exp((rate - reduced.div) * dt);
    const double q = (growth - down) / (up - down);
    if (!(q > 0.0 && q < 1.0)) {
        throw NumericError("binomial_put: degenerate branch probability q = " + std::to_string(q));
    }
    const double discount = std::exp(-rate * dt);
    const double pu = discount * q;
    const double pd = discount * (1.0 - q);
    const int exercise_stride = tree_steps / grid.steps;

    // Terminal payoff on S0 * up^(2j - level).
    std::vector<double> values(static_cast<std::size_t>(tree_steps) + 1);
    for (int j = 0; j <= tree_steps; ++j) {
        const double s = reduced.spot * std::pow(up, 2 * j - tree_steps);
        values[static_cast<std::size_t>(j)] = std::max(strike - s, 0.0);
    }

    for (int level = tree_steps - 1; level >= 0; --level) {
        const bool can_exercise =
            style == ExerciseStyle::American || level % exercise_stride == 0;
        for (int j = 0; j <= level; ++j) {
            double v = pd * values[static_cast<std::size_t>(j)] +
                       pu * values[static_cast<std::size_t>(j) + 1];
            if (can_exercise) {
                const double s = reduced.spot * std::pow(up, 2 * j - level);
                v = std::max(v, strike - s);
            }
            values[static_cast<std::size_t>(j)] = v;
        }
    }
    return values[0];
}

} // namespace chaosdual
