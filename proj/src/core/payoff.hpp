#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/market.hpp"

namespace chaosdual {

enum class PayoffKind {
    BasketPut,
    MaxCall,
    MinPut,
    GeometricPut,
};

std::string to_string(PayoffKind kind);
PayoffKind payoff_kind_from_string(const std::string& name);

struct PayoffSpec {
    PayoffKind kind = PayoffKind::BasketPut;
    double strike = 0.0;
    std::vector<double> weights;  // basket only; empty means equal weights 1/d'

    void validate(int assets) const;
};

/// Discounted exercise values z_{i,k} = exp(-r t_k) * phi(S_{t_k}) together
/// with the first in-the-money date tau0 = min{k : z_k > 0} capped at n.
struct DiscountedPayoffs {
    int paths = 0;
    int steps = 0;  // n; each path carries n+1 dates
    std::vector<double> z;
    std::vector<std::int32_t> tau0;

    std::span<const double> path(int i) const {
        const std::size_t len = static_cast<std::size_t>(steps) + 1;
        return {z.data() + static_cast<std::size_t>(i) * len, len};
    }
};

DiscountedPayoffs evaluate_payoffs(const PayoffSpec& spec, const PathBatch& batch,
                                   double rate, const TimeGrid& grid);

/// Smallest k with z[k] > 0, capped at z.size() - 1.
int first_in_the_money(std::span<const double> z);

} // namespace chaosdual
