#pragma once

#include "core/market.hpp"

namespace chaosdual {

/// 1-D equivalent of a geometric-basket contract: the geometric average of
/// correlated lognormals is itself lognormal with these parameters.
struct ReducedParams {
    double spot = 0.0;
    double vol = 0.0;
    double div = 0.0;
};

ReducedParams geometric_reduction(const BlackScholesParams& params);

/// Closed-form European put with continuous dividend yield.
double bs_european_put(double spot, double vol, double rate, double div,
                       double maturity, double strike);

enum class ExerciseStyle {
    Bermudan,  // exercise only at the grid dates t_0..t_n
    American,  // exercise at every tree level
};

/// Cox-Ross-Rubinstein tree put on the reduced 1-D asset. tree_steps must be
/// a multiple of grid.steps so exercise dates land on tree levels.
double binomial_put(const ReducedParams& reduced, double rate, double strike,
                    const TimeGrid& grid, int tree_steps, ExerciseStyle style);

inline double binomial_bermudan_put(const ReducedParams& reduced, double rate, double strike,
                                    const TimeGrid& grid, int tree_steps) {
    return binomial_put(reduced, rate, strike, grid, tree_steps, ExerciseStyle::Bermudan);
}

} // namespace chaosdual
