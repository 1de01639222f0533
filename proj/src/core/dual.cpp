#include "core/dual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/summation.hpp"

namespace chaosdual {

std::vector<double> restarted_martingale(std::span<const double> prefix_sums, int tau0) {
    const int n = static_cast<int>(prefix_sums.size()) - 1;
    if (n < 0) {
        throw std::invalid_argument("restarted_martingale: empty prefix sums");
    }
    if (tau0 < 0 || tau0 > n) {
        throw std::invalid_argument("restarted_martingale: tau0 out of range");
    }
    std::vector<double> out(prefix_sums.size(), 0.0);
    const double base = prefix_sums[static_cast<std::size_t>(tau0)];
    for (int k = tau0 + 1; k <= n; ++k) {
        out[static_cast<std::size_t>(k)] = prefix_sums[static_cast<std::size_t>(k)] - base;
    }
    return out;
}

PathMax pathwise_max(std::span<const double> z, std::span<const double> martingale, int tau0) {
    if (z.size() != martingale.size() || z.empty()) {
        throw std::invalid_argument("pathwise_max: z and martingale must have equal length n+1");
    }
    const int n = static_cast<int>(z.size()) - 1;
    if (tau0 < 0 || tau0 > n) {
        throw std::invalid_argument("pathwise_max: tau0 out of range");
    }
    PathMax best{z[static_cast<std::size_t>(tau0)] - martingale[static_cast<std::size_t>(tau0)], tau0};
    for (int k = tau0 + 1; k <= n; ++k) {
        const double v = z[static_cast<std::size_t>(k)] - martingale[static_cast<std::size_t>(k)];
        if (v > best.value) {
            best.value = v;
            best.date = k;
        }
    }
    return best;
}

namespace {

struct ChunkPartial {
    Compensated value;
    Compensated second;
    std::vector<Compensated> gradient;
};

struct WorkerScratch {
    std::vector<double> table;
    std::vector<double> basis_values;
};

void check_partition(std::span<const PathRange> chunks, int paths) {
    if (chunks.empty()) {
        throw std::invalid_argument("parallel_reduce: empty chunk list");
    }
    std::int64_t expect = 0;
    for (const auto& c : chunks) {
        if (c.begin != expect || c.end <= c.begin) {
            throw std::invalid_argument("parallel_reduce: chunks must partition the path range");
        }
        expect = c.end;
    }
    if (expect != paths) {
        throw std::invalid_argument("parallel_reduce: chunks must cover all paths");
    }
}

} // namespace

ObjectiveReport parallel_reduce(const MultiIndexBasis& basis, const PathBatch& batch,
                                const DiscountedPayoffs& payoffs, std::span<const double> lambda,
                                std::span<const PathRange> chunks, int threads) {
    const std::size_t dim = basis.size();
    if (lambda.size() != dim) {
        throw std::invalid_argument("objective: lambda must have one entry per basis element");
    }
    if (payoffs.paths != batch.paths() || payoffs.steps != batch.steps()) {
        throw std::invalid_argument("objective: payoffs and batch shapes disagree");
    }
    if (basis.steps() != batch.steps() || basis.dim() != batch.dim()) {
        throw std::invalid_argument("objective: basis and batch shapes disagree");
    }
    check_partition(chunks, batch.paths());

    const int n = batch.steps();
    const int m = batch.paths();
    const int worker_count = std::max(1, std::min<int>(resolve_threads(threads),
                                                       static_cast<int>(chunks.size())));

    std::vector<ChunkPartial> partials(chunks.size());
    std::vector<WorkerScratch> scratch(static_cast<std::size_t>(worker_count));
    ObjectiveReport report;
    report.argmax_dates.assign(static_cast<std::size_t>(m), 0);

    run_tasks(chunks.size(), worker_count, [&](int worker, std::size_t ci) {
        auto& ws = scratch[static_cast<std::size_t>(worker)];
        if (ws.table.empty()) {
            ws.table.resize(basis.table_size());
            ws.basis_values.resize(dim);
        }
        auto& partial = partials[ci];
        partial.gradient.assign(dim, Compensated{});

        const double* lam = lambda.data();
        double* bval = ws.basis_values.data();

        for (std::int64_t i = chunks[ci].begin; i < chunks[ci].end; ++i) {
            const auto z = payoffs.path(static_cast<int>(i));
            const int tau0 = payoffs.tau0[static_cast<std::size_t>(i)];

            if (tau0 == n) {
                // Martingale restarted at maturity: the only candidate date is n.
                const double v = z[static_cast<std::size_t>(n)];
                partial.value.add(v);
                partial.second.add(v * v);
                report.argmax_dates[static_cast<std::size_t>(i)] = n;
                continue;
            }

            basis.fill_hermite_table(batch.increments(static_cast<int>(i)), ws.table);
            const std::size_t first = basis.activation_begin(tau0 + 1);
            basis.eval_from_table(ws.table, first, ws.basis_values);

            // Walk dates tau0+1..n, folding in each activation group once.
            double best = z[static_cast<std::size_t>(tau0)];
            int kstar = tau0;
            double martingale = 0.0;
            std::size_t cursor = first;
            for (int k = tau0 + 1; k <= n; ++k) {
                const std::size_t end = basis.activation_begin(k + 1);
                double delta = 0.0;
                for (std::size_t e = cursor; e < end; ++e) {
                    delta += lam[e] * bval[e];
                }
                cursor = end;
                martingale += delta;
                const double v = z[static_cast<std::size_t>(k)] - martingale;
                if (v > best) {
                    best = v;
                    kstar = k;
                }
            }

            partial.value.add(best);
            partial.second.add(best * best);
            report.argmax_dates[static_cast<std::size_t>(i)] = kstar;

            // d/d lambda_alpha of -(N at the argmax): -b_alpha for activations
            // in (tau0, kstar].
            const std::size_t grad_end = basis.activation_begin(kstar + 1);
            for (std::size_t e = first; e < grad_end; ++e) {
                partial.gradient[e].add(-bval[e]);
            }
        }
    });

    Compensated value;
    Compensated second;
    std::vector<Compensated> gradient(dim);
    for (const auto& partial : partials) {
        value.merge(partial.value);
        second.merge(partial.second);
        for (std::size_t e = 0; e < dim; ++e) {
            gradient[e].merge(partial.gradient[e]);
        }
    }

    const double inv_m = 1.0 / static_cast<double>(m);
    report.value = value.result() * inv_m;
    report.second_moment = second.result() * inv_m;
    report.variance = std::max(0.0, report.second_moment - report.value * report.value);
    report.std_error = std::sqrt(report.variance * inv_m);
    report.gradient.resize(dim);
    for (std::size_t e = 0; e < dim; ++e) {
        report.gradient[e] = gradient[e].result() * inv_m;
    }
    return report;
}

DualObjective::DualObjective(const MultiIndexBasis& basis, const PathBatch& batch,
                             const DiscountedPayoffs& payoffs, int threads,
                             std::int64_t chunk_size)
    : basis_(basis), batch_(batch), payoffs_(payoffs), threads_(resolve_threads(threads)),
      chunks_(make_chunks(batch.paths(), chunk_size)) {}

ObjectiveReport DualObjective::evaluate(std::span<const double> lambda) const {
    return parallel_reduce(basis_, batch_, payoffs_, lambda, chunks_, threads_);
}

ObjectiveReport DualObjective::evaluate(std::span<const double> lambda,
                                        std::span<const PathRange> chunks) const {
    return parallel_reduce(basis_, batch_, payoffs_, lambda, chunks, threads_);
}

ObjectiveReport objective_and_gradient(const MultiIndexBasis& basis, const PathBatch& batch,
                                       const DiscountedPayoffs& payoffs,
                                       std::span<const double> lambda) {
    const PathRange whole{0, batch.paths()};
    return parallel_reduce(basis, batch, payoffs, lambda, {&whole, 1}, 1);
}

} // namespace chaosdual
