#include "core/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaosdual {

std::string to_string(PayoffKind kind) {
    switch (kind) {
    case PayoffKind::BasketPut: return "basket_put";
    case PayoffKind::MaxCall: return "max_call";
    case PayoffKind::MinPut: return "min_put";
    case PayoffKind::GeometricPut: return "geometric_put";
    }
    return "unknown";
}

PayoffKind payoff_kind_from_string(const std::string& name) {
    if (name == "basket_put") return PayoffKind::BasketPut;
    if (name == "max_call") return PayoffKind::MaxCall;
    if (name == "min_put") return PayoffKind::MinPut;
    if (name == "geometric_put") return PayoffKind::GeometricPut;
    throw std::invalid_argument("payoff.kind: unknown payoff '" + name + "'");
}

void PayoffSpec::validate(int assets) const {
    if (!(strike > 0.0)) {
        throw std::invalid_argument("contract.K must be > 0");
    }
    if (!weights.empty()) {
        if (kind != PayoffKind::BasketPut) {
            throw std::invalid_argument("payoff.weights only apply to basket_put");
        }
        if (static_cast<int>(weights.size()) != assets) {
            throw std::invalid_argument("payoff.weights must have one entry per asset");
        }
        for (double w : weights) {
            if (!std::isfinite(w)) {
                throw std::invalid_argument("payoff.weights must be finite");
            }
        }
    }
}

int first_in_the_money(std::span<const double> z) {
    const int n = static_cast<int>(z.size()) - 1;
    for (int k = 0; k < n; ++k) {
        if (z[static_cast<std::size_t>(k)] > 0.0) {
            return k;
        }
    }
    return n;
}

namespace {

double intrinsic(const PayoffSpec& spec, std::span<const double> spots_at_date,
                 std::span<const double> weights) {
    const std::size_t d = spots_at_date.size();
    switch (spec.kind) {
    case PayoffKind::BasketPut: {
        double basket = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            basket += weights[j] * spots_at_date[j];
        }
        return std::max(spec.strike - basket, 0.0);
    }
    case PayoffKind::MaxCall: {
        double best = spots_at_date[0];
        for (std::size_t j = 1; j < d; ++j) {
            best = std::max(best, spots_at_date[j]);
        }
        return std::max(best - spec.strike, 0.0);
    }
    case PayoffKind::MinPut: {
        double worst = spots_at_date[0];
        for (std::size_t j = 1; j < d; ++j) {
            worst = std::min(worst, spots_at_date[j]);
        }
        return std::max(spec.strike - worst, 0.0);
    }
    case PayoffKind::GeometricPut: {
        double log_sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            log_sum += std::log(spots_at_date[j]);
        }
        return std::max(spec.strike - std::exp(log_sum / static_cast<double>(d)), 0.0);
    }
    }
    return 0.0;
}

} // namespace

DiscountedPayoffs evaluate_payoffs(const PayoffSpec& spec, const PathBatch& batch,
                                   double rate, const TimeGrid& grid) {
    spec.validate(batch.assets());
    if (grid.steps != batch.steps()) {
        throw std::invalid_argument("payoff: grid and batch disagree on the step count");
    }
    const int n = batch.steps();
    const int d = batch.assets();
    const int m = batch.paths();

    std::vector<double> weights = spec.weights;
    if (spec.kind == PayoffKind::BasketPut && weights.empty()) {
        weights.assign(static_cast<std::size_t>(d), 1.0 / d);
    }

    std::vector<double> discount(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        discount[static_cast<std::size_t>(k)] = std::exp(-rate * grid.date(k));
    }

    DiscountedPayoffs out;
    out.paths = m;
    out.steps = n;
    out.z.resize(static_cast<std::size_t>(m) * (n + 1));
    out.tau0.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const auto spots = batch.spots(i);
        double* zi = out.z.data() + static_cast<std::size_t>(i) * (n + 1);
        for (int k = 0; k <= n; ++k) {
            const std::span<const double> at_date{spots.data() + static_cast<std::size_t>(k) * d,
                                                  static_cast<std::size_t>(d)};
            zi[k] = discount[static_cast<std::size_t>(k)] * intrinsic(spec, at_date, weights);
        }
        out.tau0[static_cast<std::size_t>(i)] =
            first_in_the_money({zi, static_cast<std::size_t>(n) + 1});
    }
    return out;
}

} // namespace chaosdual
