#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/basis.hpp"
#include "core/market.hpp"
#include "core/parallel.hpp"
#include "core/payoff.hpp"

namespace chaosdual {

/// One evaluation of the sample-average dual objective.
struct ObjectiveReport {
    double value = 0.0;          // (1/m) sum_i max_{tau0<=k<=n} (z_k - N_k)
    double second_moment = 0.0;  // (1/m) sum_i (max ...)^2
    double variance = 0.0;       // second_moment - value^2, clamped at 0
    double std_error = 0.0;      // sqrt(variance / m)
    std::vector<double> gradient;
    std::vector<std::int32_t> argmax_dates;
};

/// N_k = M_k - M_{min(k, tau0)}; zero up to tau0, the shifted martingale after.
std::vector<double> restarted_martingale(std::span<const double> prefix_sums, int tau0);

struct PathMax {
    double value = 0.0;
    int date = 0;  // smallest maximizing index in [tau0, n]
};

PathMax pathwise_max(std::span<const double> z, std::span<const double> martingale, int tau0);

/// Dual objective bound to one (basis, batch, payoffs) triple. Evaluations
/// map over a chunk grid fixed at construction and reduce per-chunk partials
/// in chunk order, so results are bitwise identical for every thread count.
/// evaluate() is const and allocates its own scratch: concurrent calls with
/// distinct reports are safe.
class DualObjective {
public:
    DualObjective(const MultiIndexBasis& basis, const PathBatch& batch,
                  const DiscountedPayoffs& payoffs, int threads = 1,
                  std::int64_t chunk_size = 0);

    ObjectiveReport evaluate(std::span<const double> lambda) const;
    ObjectiveReport evaluate(std::span<const double> lambda,
                             std::span<const PathRange> chunks) const;

    const MultiIndexBasis& basis() const { return basis_; }
    const DiscountedPayoffs& payoffs() const { return payoffs_; }
    int paths() const { return batch_.paths(); }
    int threads() const { return threads_; }
    std::span<const PathRange> chunks() const { return chunks_; }

private:
    const MultiIndexBasis& basis_;
    const PathBatch& batch_;
    const DiscountedPayoffs& payoffs_;
    int threads_;
    std::vector<PathRange> chunks_;
};

/// Single-shot sequential evaluation (one chunk).
ObjectiveReport objective_and_gradient(const MultiIndexBasis& basis, const PathBatch& batch,
                                       const DiscountedPayoffs& payoffs,
                                       std::span<const double> lambda);

/// Map-reduce over an explicit chunk partition of the path set; the partials
/// are combined in chunk order. Throws if chunks do not partition [0, m).
ObjectiveReport parallel_reduce(const MultiIndexBasis& basis, const PathBatch& batch,
                                const DiscountedPayoffs& payoffs, std::span<const double> lambda,
                                std::span<const PathRange> chunks, int threads);

} // namespace chaosdual
