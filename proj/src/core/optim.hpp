#pragma once

#include <cmath>
#include <vector>

#include "core/dual.hpp"
#include "core/payoff.hpp"

namespace chaosdual {

struct DescentConfig {
    double epsilon = 5e-3;                       // relative-improvement stop
    int max_iters = 200;                         // cap on accepted iterations
    double gamma0 = 1.0;                         // initial magnitude factor
    double min_gamma = 0x1.0p-30;                // underflow guard for gamma
    double anchor = 0.0;                         // European price proxy v#

    void validate() const;
};

struct IterationRecord {
    double value = 0.0;
    double step = 0.0;       // Polyak quotient alpha before the gamma factor
    double gamma = 0.0;
    double grad_norm = 0.0;  // gradient norm at the accepted point
};

struct DescentTrace {
    std::vector<IterationRecord> accepted;  // values strictly decreasing
    int rejections = 0;
};

struct MinimizeResult {
    std::vector<double> lambda;
    double value = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    int iterations = 0;    // accepted
    int evaluations = 0;   // total objective evaluations
    DescentTrace trace;
};

/// Monte Carlo European price on the same paths: mean of the terminal
/// discounted payoff.
double european_anchor(const DiscountedPayoffs& payoffs);

/// Polyak step length (value - anchor) / ||grad||^2; the caller scales by gamma.
double polyak_step(double value, double anchor, double grad_norm_sq);

/// Gradient descent with the Polyak step and a halving magnitude factor.
/// Starts from lambda = 0 with a zero direction, so the first evaluation is
/// the plain Monte Carlo upper bound; moves are accepted only when the
/// objective strictly decreases, and gamma halves on every rejection.
MinimizeResult minimize(const DualObjective& objective, const DescentConfig& config);

} // namespace chaosdual
