#pragma once

#include <stdexcept>
#include <string>

namespace chaosdual {

/// Invalid or inconsistent run configuration (bad file, unknown key,
/// violated precondition). Maps to exit code 2 at the CLI boundary.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure during pricing (non-finite objective, degenerate tree
/// probabilities, determinism violation). Maps to exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace chaosdual
