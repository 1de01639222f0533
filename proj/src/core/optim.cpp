#include "core/optim.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"
#include "core/summation.hpp"

namespace chaosdual {

void DescentConfig::validate() const {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("method.epsilon must be > 0");
    }
    if (max_iters < 1) {
        throw std::invalid_argument("method.max_iters must be >= 1");
    }
    if (!(gamma0 > 0.0 && gamma0 <= 1.0)) {
        throw std::invalid_argument("method.gamma0 must be in (0, 1]");
    }
    if (!(min_gamma > 0.0)) {
        throw std::invalid_argument("method.min_gamma must be > 0");
    }
}

double european_anchor(const DiscountedPayoffs& payoffs) {
    if (payoffs.paths < 1) {
        throw std::invalid_argument("method.m must be >= 1");
    }
    Compensated sum;
    for (int i = 0; i < payoffs.paths; ++i) {
        sum.add(payoffs.path(i)[static_cast<std::size_t>(payoffs.steps)]);
    }
    return sum.result() / payoffs.paths;
}

double polyak_step(double value, double anchor, double grad_norm_sq) {
    if (!(grad_norm_sq > 0.0)) {
        throw std::invalid_argument("polyak_step: gradient norm must be > 0");
    }
    return (value - anchor) / grad_norm_sq;
}

MinimizeResult minimize(const DualObjective& objective, const DescentConfig& config) {
    config.validate();
    const std::size_t dim = objective.basis().size();

    std::vector<double> x(dim, 0.0);
    std::vector<double> direction(dim, 0.0);
    std::vector<double> trial(dim, 0.0);
    double grad_norm_sq = 0.0;
    double value = std::numeric_limits<double>::infinity();
    double gamma = config.gamma0;

    MinimizeResult result;
    double variance_at_x = 0.0;
    double std_error_at_x = 0.0;

    while (true) {
        double alpha = 0.0;
        if (grad_norm_sq > 0.0) {
            alpha = polyak_step(value, config.anchor, grad_norm_sq);
            const double scale = gamma * alpha;
            for (std::size_t e = 0; e < dim; ++e) {
                trial[e] = x[e] - scale * direction[e];
            }
        } else {
            trial = x;
        }

        ObjectiveReport report = objective.evaluate(trial);
        ++result.evaluations;
        if (!std::isfinite(report.value)) {
            double norm = 0.0;
            for (double v : trial) {
                norm += v * v;
            }
            throw NumericError("objective became non-finite at evaluation " +
                               std::to_string(result.evaluations) + " (|lambda| = " +
                               std::to_string(std::sqrt(norm)) + ")");
        }

        if (report.value < value) {
            const double previous = value;
            x.swap(trial);
            value = report.value;
            direction = std::move(report.gradient);
            grad_norm_sq = 0.0;
            for (double g : direction) {
                grad_norm_sq += g * g;
            }
            variance_at_x = report.variance;
            std_error_at_x = report.std_error;
            result.trace.accepted.push_back(
                {value, alpha, gamma, std::sqrt(grad_norm_sq)});

            if (std::isfinite(previous) && previous > 0.0 &&
                (previous - value) / previous <= config.epsilon) {
                break;
            }
            if (grad_norm_sq == 0.0) {
                break;  // flat objective, nothing left to move
            }
            if (static_cast<int>(result.trace.accepted.size()) >= config.max_iters) {
                break;
            }
        } else {
            gamma *= 0.5;
            ++result.trace.rejections;
            if (gamma < config.min_gamma) {
                break;
            }
        }
    }

    result.lambda = std::move(x);
    result.value = value;
    result.variance = variance_at_x;
    result.std_error = std_error_at_x;
    result.iterations = static_cast<int>(result.trace.accepted.size());
    return result;
}

} // namespace chaosdual
