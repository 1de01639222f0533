#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace chaosdual {

/// Probabilists' Hermite polynomial H_i(x) via the three-term recurrence
/// H_{i+1}(x) = x H_i(x) - i H_{i-1}(x), H_0 = 1, H_1 = x.
double hermite_eval(int degree, double x);

/// Number of tensor Hermite basis elements with total degree in [1, degree_cap]
/// over steps*dim increment slots, i.e. C(steps*dim + degree_cap, steps*dim) - 1.
/// Throws std::overflow_error when the count exceeds the 32-bit element index range.
std::uint64_t basis_cardinality(int degree_cap, int steps, int dim);

/// One exponent of a multi-index: slot = (time_slot - 1)*dim + component - 1.
struct MultiIndexEntry {
    std::uint32_t slot;
    int exponent;
};

/// Enumerated tensor Hermite basis over the standardized Brownian increments
/// G_i^j, i = 1..n, j = 1..d, truncated at total degree p. The constant
/// element is excluded. Elements are sorted by nondecreasing activation date
/// (the last time slot carrying a nonzero exponent), ties broken by ascending
/// lexicographic order of the flattened exponent tuple. Basis values are
/// produced in the orthonormal scaling H_alpha / sqrt(prod alpha_i^j !).
///
/// Immutable after construction; safe to share across threads.
class MultiIndexBasis {
public:
    static MultiIndexBasis enumerate(int degree_cap, int steps, int dim);

    int degree_cap() const { return p_; }
    int steps() const { return n_; }
    int dim() const { return d_; }
    std::size_t size() const { return activation_.size(); }

    /// Activation date k(alpha) in 1..n.
    int activation(std::size_t element) const { return activation_[element]; }

    /// Index of the first element with activation date >= k, for k in 0..n+1.
    /// Elements with activation <= k form the prefix [0, activation_begin(k+1)).
    std::size_t activation_begin(int k) const { return act_begin_[static_cast<std::size_t>(k)]; }

    /// Nonzero exponents of one element, slots ascending.
    std::vector<MultiIndexEntry> exponents(std::size_t element) const;

    /// sqrt(prod alpha_i^j !) for one element.
    double normalization(std::size_t element) const;

    /// Scratch size for fill_hermite_table: one row of p+1 degrees per slot
    /// plus a trailing 1.0 used to pad sparse elements.
    std::size_t table_size() const { return static_cast<std::size_t>(n_) * d_ * (p_ + 1) + 1; }

    /// Normalized univariate values H_e(g_s)/sqrt(e!) for every slot s and
    /// degree e <= p. increments has n*d entries in slot order.
    void fill_hermite_table(std::span<const double> increments, std::span<double> table) const;

    /// values[e] = product of the element's normalized univariate factors,
    /// for e in [first, size()). Entries below `first` are left untouched.
    void eval_from_table(std::span<const double> table, std::size_t first,
                         std::span<double> values) const;

    /// Convenience: full evaluation of all elements on one path.
    std::vector<double> eval(std::span<const double> increments) const;

private:
    MultiIndexBasis() = default;

    int p_ = 0;
    int n_ = 0;
    int d_ = 0;
    std::uint32_t pad_index_ = 0;
    // Fixed-width element encoding: p_ table indices per element, padded with
    // pad_index_ (a table cell holding 1.0). Index = slot*(p_+1) + exponent.
    std::vector<std::uint32_t> entry_idx_;
    std::vector<std::int32_t> activation_;
    std::vector<std::size_t> act_begin_;   // length n_+2
    std::vector<double> inv_sqrt_fact_;    // length p_+1
};

/// Running conditional-expectation sums M_k = sum_{alpha: k(alpha) <= k}
/// lambda_alpha * values[alpha] for k = 0..n. M_0 = 0. Single pass over the
/// activation-sorted elements.
std::vector<double> conditional_prefix_sum(const MultiIndexBasis& basis,
                                           std::span<const double> values,
                                           std::span<const double> lambda);

} // namespace chaosdual
