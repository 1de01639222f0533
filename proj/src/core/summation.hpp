#pragma once

#include <cmath>

namespace chaosdual {

/// Kahan-Babuska-Neumaier compensated accumulator. Partial sums carry the
/// running error term, so merging per-chunk partials in a fixed order gives
/// the same double as one long accumulation for any sane chunking.
struct Compensated {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    void merge(const Compensated& other) {
        add(other.sum);
        comp += other.comp;
    }

    double result() const { return sum + comp; }
};

} // namespace chaosdual
