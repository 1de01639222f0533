#pragma once

#include <span>

#include "core/config.hpp"
#include "core/optim.hpp"
#include "core/report.hpp"

namespace chaosdual {

/// Full pricing pipeline: simulate -> payoffs -> basis -> minimize.
/// Writes the report / trace files named in the config, then returns the report.
Report run_price(const RunConfig& config);

/// Reference prices for contracts with an exact 1-D reduction: reduced
/// parameters, Bermudan and American tree prices, European closed form.
Report run_oracle(const RunConfig& config);

/// Repeats the pricing run at each thread count, requires bitwise-identical
/// prices, and reports per-count wall times and parallel efficiency.
Report run_bench(const RunConfig& config, std::span<const int> thread_counts);

/// Pricing with access to the optimizer internals (used by tests and bench).
struct PricingRun {
    MinimizeResult opt;
    double european = 0.0;
    std::uint64_t basis_size = 0;
    double time_simulate = 0.0;
    double time_optimize = 0.0;
};

PricingRun price_with_details(const RunConfig& config, int threads_override = -1);

} // namespace chaosdual
