#pragma once

#include <string>
#include <vector>

namespace chaosdual {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Statistical and structural invariants of the pricing stack: basis
/// orthonormality, conditional-expectation drop rule, gradient consistency,
/// convexity, optimizer descent, and determinism. Designed to finish within
/// a few minutes on one core.
std::vector<CheckResult> run_property_suite();

} // namespace chaosdual
