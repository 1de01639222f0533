#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/market.hpp"
#include "core/payoff.hpp"

namespace chaosdual {

enum class ModelType {
    BlackScholes,
    Heston,
};

struct MethodConfig {
    int degree = 2;               // p
    std::int64_t paths = 10000;   // m
    std::uint64_t seed = 0;
    int threads = 0;              // 0 = hardware concurrency
    double epsilon = 5e-3;
    int max_iters = 200;
    std::int64_t chunk_size = 0;  // 0 = automatic grid
    int tree_steps = 0;           // oracle tree; 0 = ~9000 rounded to a multiple of n
};

struct OutputConfig {
    std::string report_path;
    std::string trace_path;
};

/// Full pricing run description, loaded from a sectioned key/value file.
/// Unknown sections or keys are rejected.
struct RunConfig {
    std::string comment;

    ModelType model = ModelType::BlackScholes;
    BlackScholesParams bs;
    HestonParams heston;

    PayoffKind payoff_kind = PayoffKind::BasketPut;
    std::vector<double> weights;

    double maturity = 1.0;  // T
    double strike = 100.0;  // K
    int steps = 1;          // n

    MethodConfig method;
    OutputConfig output;

    static RunConfig load(const std::string& path);
    static RunConfig parse(const std::string& text);

    /// Dotted-key override, e.g. ("method.m", "5000"); same validation as the file.
    void override_key(const std::string& dotted_key, const std::string& value);

    /// Checks every module precondition up front; throws ConfigError.
    void validate() const;

    int assets() const;
    int brownian_dim() const;
    TimeGrid grid() const { return TimeGrid(maturity, steps); }
    PayoffSpec payoff_spec() const;

    /// Oracle tree steps resolved to a positive multiple of the grid steps.
    int resolved_tree_steps() const;
};

} // namespace chaosdual
