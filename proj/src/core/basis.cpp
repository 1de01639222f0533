#include "core/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace chaosdual {

double hermite_eval(int degree, double x) {
    if (degree < 0) {
        throw std::invalid_argument("hermite_eval: degree must be >= 0");
    }
    if (degree == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = x;
    for (int i = 1; i < degree; ++i) {
        const double next = x * cur - static_cast<double>(i) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

void check_basis_params(int degree_cap, int steps, int dim) {
    if (degree_cap < 1) {
        throw std::invalid_argument("basis: degree cap must be >= 1");
    }
    if (steps < 1) {
        throw std::invalid_argument("basis: steps must be >= 1");
    }
    if (dim < 1) {
        throw std::invalid_argument("basis: dim must be >= 1");
    }
}

} // namespace

std::uint64_t basis_cardinality(int degree_cap, int steps, int dim) {
    check_basis_params(degree_cap, steps, dim);
    const std::uint64_t slots = static_cast<std::uint64_t>(steps) * static_cast<std::uint64_t>(dim);
    // C(slots + p, p) computed incrementally; each partial product is itself
    // a binomial coefficient, so the division is exact.
    std::uint64_t count = 1;
    for (int i = 1; i <= degree_cap; ++i) {
        const unsigned __int128 wide = static_cast<unsigned __int128>(count) * (slots + i);
        const unsigned __int128 next = wide / static_cast<std::uint64_t>(i);
        if (next > static_cast<unsigned __int128>(std::numeric_limits<std::int32_t>::max()) + 1) {
            throw std::overflow_error(
                "basis: cardinality exceeds the element index range for degree " +
                std::to_string(degree_cap) + ", steps " + std::to_string(steps) +
                ", dim " + std::to_string(dim));
        }
        count = static_cast<std::uint64_t>(next);
    }
    return count - 1;
}

namespace {

struct SparseIndex {
    // (slot, exponent) pairs, slots strictly ascending.
    std::vector<MultiIndexEntry> entries;
    std::int32_t activation = 0;
};

// Ascending lexicographic order on the flattened dense exponent tuple.
bool lex_less(const SparseIndex& a, const SparseIndex& b) {
    std::size_t ia = 0;
    std::size_t ib = 0;
    while (ia < a.entries.size() && ib < b.entries.size()) {
        const auto& ea = a.entries[ia];
        const auto& eb = b.entries[ib];
        if (ea.slot != eb.slot) {
            // The element with the earlier nonzero slot is lexicographically larger.
            return ea.slot > eb.slot;
        }
        if (ea.exponent != eb.exponent) {
            return ea.exponent < eb.exponent;
        }
        ++ia;
        ++ib;
    }
    return ia == a.entries.size() && ib < b.entries.size();
}

} // namespace

MultiIndexBasis MultiIndexBasis::enumerate(int degree_cap, int steps, int dim) {
    const std::uint64_t expected = basis_cardinality(degree_cap, steps, dim);
    const std::uint32_t slots = static_cast<std::uint32_t>(steps) * static_cast<std::uint32_t>(dim);

    std::vector<SparseIndex> elements;
    elements.reserve(static_cast<std::size_t>(expected));

    // Multisets of slots of size q enumerated as nondecreasing q-tuples; the
    // exponent of a slot is its multiplicity.
    std::vector<std::uint32_t> pick;
    for (int q = 1; q <= degree_cap; ++q) {
        pick.assign(static_cast<std::size_t>(q), 0);
        while (true) {
            SparseIndex idx;
            for (std::size_t t = 0; t < pick.size(); ++t) {
                if (!idx.entries.empty() && idx.entries.back().slot == pick[t]) {
                    ++idx.entries.back().exponent;
                } else {
                    idx.entries.push_back({pick[t], 1});
                }
            }
            idx.activation = static_cast<std::int32_t>(idx.entries.back().slot / static_cast<std::uint32_t>(dim)) + 1;
            elements.push_back(std::move(idx));

            int pos = q - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == slots - 1) {
                --pos;
            }
            if (pos < 0) {
                break;
            }
            const std::uint32_t v = pick[static_cast<std::size_t>(pos)] + 1;
            for (std::size_t t = static_cast<std::size_t>(pos); t < pick.size(); ++t) {
                pick[t] = v;
            }
        }
    }

    std::sort(elements.begin(), elements.end(), [](const SparseIndex& a, const SparseIndex& b) {
        if (a.activation != b.activation) {
            return a.activation < b.activation;
        }
        return lex_less(a, b);
    });

    MultiIndexBasis basis;
    basis.p_ = degree_cap;
    basis.n_ = steps;
    basis.d_ = dim;
    basis.pad_index_ = slots * static_cast<std::uint32_t>(degree_cap + 1);

    basis.inv_sqrt_fact_.assign(static_cast<std::size_t>(degree_cap) + 1, 1.0);
    for (int e = 2; e <= degree_cap; ++e) {
        basis.inv_sqrt_fact_[static_cast<std::size_t>(e)] =
            basis.inv_sqrt_fact_[static_cast<std::size_t>(e - 1)] / std::sqrt(static_cast<double>(e));
    }

    const std::size_t count = elements.size();
    basis.activation_.resize(count);
    basis.entry_idx_.assign(count * static_cast<std::size_t>(degree_cap), basis.pad_index_);
    for (std::size_t e = 0; e < count; ++e) {
        basis.activation_[e] = elements[e].activation;
        std::size_t w = e * static_cast<std::size_t>(degree_cap);
        for (const auto& entry : elements[e].entries) {
            basis.entry_idx_[w++] = entry.slot * static_cast<std::uint32_t>(degree_cap + 1) +
                                    static_cast<std::uint32_t>(entry.exponent);
        }
    }

    basis.act_begin_.assign(static_cast<std::size_t>(steps) + 2, count);
    basis.act_begin_[0] = 0;
    std::size_t cursor = 0;
    for (int k = 1; k <= steps; ++k) {
        basis.act_begin_[static_cast<std::size_t>(k)] = cursor;
        while (cursor < count && basis.activation_[cursor] == k) {
            ++cursor;
        }
    }
    basis.act_begin_[static_cast<std::size_t>(steps) + 1] = count;
    return basis;
}

std::vector<MultiIndexEntry> MultiIndexBasis::exponents(std::size_t element) const {
    std::vector<MultiIndexEntry> out;
    const std::size_t w = element * static_cast<std::size_t>(p_);
    for (int t = 0; t < p_; ++t) {
        const std::uint32_t idx = entry_idx_[w + static_cast<std::size_t>(t)];
        if (idx == pad_index_) {
            break;
        }
        out.push_back({idx / static_cast<std::uint32_t>(p_ + 1),
                       static_cast<int>(idx % static_cast<std::uint32_t>(p_ + 1))});
    }
    return out;
}

double MultiIndexBasis::normalization(std::size_t element) const {
    double fact = 1.0;
    for (const auto& entry : exponents(element)) {
        for (int i = 2; i <= entry.exponent; ++i) {
            fact *= static_cast<double>(i);
        }
    }
    return std::sqrt(fact);
}

void MultiIndexBasis::fill_hermite_table(std::span<const double> increments,
                                         std::span<double> table) const {
    const std::size_t slots = static_cast<std::size_t>(n_) * static_cast<std::size_t>(d_);
    if (increments.size() != slots) {
        throw std::invalid_argument("basis: increments must have steps*dim entries");
    }
    if (table.size() < table_size()) {
        throw std::invalid_argument("basis: hermite table too small");
    }
    const int width = p_ + 1;
    for (std::size_t s = 0; s < slots; ++s) {
        const double x = increments[s];
        double* row = table.data() + s * static_cast<std::size_t>(width);
        double prev = 1.0;
        double cur = x;
        row[0] = 1.0;
        if (p_ >= 1) {
            row[1] = x;
        }
        for (int e = 2; e <= p_; ++e) {
            const double next = x * cur - static_cast<double>(e - 1) * prev;
            prev = cur;
            cur = next;
            row[e] = next * inv_sqrt_fact_[static_cast<std::size_t>(e)];
        }
    }
    table[static_cast<std::size_t>(pad_index_)] = 1.0;
}

void MultiIndexBasis::eval_from_table(std::span<const double> table, std::size_t first,
                                      std::span<double> values) const {
    if (values.size() != size()) {
        throw std::invalid_argument("basis: values must have one entry per element");
    }
    const double* tab = table.data();
    const std::uint32_t* idx = entry_idx_.data() + first * static_cast<std::size_t>(p_);
    const std::size_t count = size();
    switch (p_) {
    case 1:
        for (std::size_t e = first; e < count; ++e) {
            values[e] = tab[idx[0]];
            idx += 1;
        }
        break;
    case 2:
        for (std::size_t e = first; e < count; ++e) {
            values[e] = tab[idx[0]] * tab[idx[1]];
            idx += 2;
        }
        break;
    case 3:
        for (std::size_t e = first; e < count; ++e) {
            values[e] = tab[idx[0]] * tab[idx[1]] * tab[idx[2]];
            idx += 3;
        }
        break;
    default:
        for (std::size_t e = first; e < count; ++e) {
            double v = tab[idx[0]];
            for (int t = 1; t < p_; ++t) {
                v *= tab[idx[t]];
            }
            values[e] = v;
            idx += p_;
        }
        break;
    }
}

std::vector<double> MultiIndexBasis::eval(std::span<const double> increments) const {
    std::vector<double> table(table_size());
    std::vector<double> values(size());
    fill_hermite_table(increments, table);
    eval_from_table(table, 0, values);
    return values;
}

std::vector<double> conditional_prefix_sum(const MultiIndexBasis& basis,
                                           std::span<const double> values,
                                           std::span<const double> lambda) {
    if (values.size() != basis.size() || lambda.size() != basis.size()) {
        throw std::invalid_argument("conditional_prefix_sum: size mismatch with basis");
    }
    std::vector<double> prefix(static_cast<std::size_t>(basis.steps()) + 1, 0.0);
    double running = 0.0;
    for (int k = 1; k <= basis.steps(); ++k) {
        const std::size_t begin = basis.activation_begin(k);
        const std::size_t end = basis.activation_begin(k + 1);
        for (std::size_t e = begin; e < end; ++e) {
            running += lambda[e] * values[e];
        }
        prefix[static_cast<std::size_t>(k)] = running;
    }
    return prefix;
}

} // namespace chaosdual
