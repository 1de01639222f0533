#include "core/market.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace chaosdual {

TimeGrid::TimeGrid(double maturity_years, int step_count)
    : maturity(maturity_years), steps(step_count) {
    if (!(maturity > 0.0)) {
        throw std::invalid_argument("grid: maturity must be > 0");
    }
    if (steps < 1) {
        throw std::invalid_argument("grid: steps must be >= 1");
    }
}

void BlackScholesParams::validate() const {
    const int d = assets();
    if (d < 1) {
        throw std::invalid_argument("model: at least one asset required");
    }
    if (vol.size() != spot.size() || div.size() != spot.size()) {
        throw std::invalid_argument("model: spot/vol/div must have the same length");
    }
    for (int j = 0; j < d; ++j) {
        if (!(spot[static_cast<std::size_t>(j)] > 0.0)) {
            throw std::invalid_argument("model.spot must be > 0 (asset " + std::to_string(j + 1) + ")");
        }
        if (!(vol[static_cast<std::size_t>(j)] > 0.0)) {
            throw std::invalid_argument("model.vol must be > 0 (asset " + std::to_string(j + 1) + ")");
        }
        if (!std::isfinite(div[static_cast<std::size_t>(j)])) {
            throw std::invalid_argument("model.div must be finite");
        }
    }
    if (!std::isfinite(rate)) {
        throw std::invalid_argument("model.rate must be finite");
    }
    const double lower = d > 1 ? -1.0 / (d - 1) : -1.0;
    if (!(corr > lower && corr <= 1.0)) {
        throw std::invalid_argument("model.corr must be in (" + std::to_string(lower) +
                                    ", 1] for " + std::to_string(d) + " assets, got " +
                                    std::to_string(corr));
    }
}

BlackScholesParams BlackScholesParams::uniform(int assets, double spot, double vol, double div,
                                               double rate, double corr) {
    BlackScholesParams p;
    p.spot.assign(static_cast<std::size_t>(assets), spot);
    p.vol.assign(static_cast<std::size_t>(assets), vol);
    p.div.assign(static_cast<std::size_t>(assets), div);
    p.rate = rate;
    p.corr = corr;
    return p;
}

void HestonParams::validate() const {
    if (!(spot > 0.0)) {
        throw std::invalid_argument("model.spot must be > 0");
    }
    // kappa = 0 and xi = 0 are degenerate but well defined (constant or
    // drift-free variance), so only strict negativity is rejected.
    if (!(v0 > 0.0) || !(kappa >= 0.0) || !(theta > 0.0) || !(xi >= 0.0)) {
        throw std::invalid_argument("model: v0 and theta must be > 0, kappa and xi >= 0");
    }
    if (!(rho > -1.0 && rho < 1.0)) {
        throw std::invalid_argument("model.rho must be in (-1, 1)");
    }
    if (!std::isfinite(rate)) {
        throw std::invalid_argument("model.rate must be finite");
    }
}

std::vector<double> chol_equicorrelation(double rho, int d) {
    if (d < 1) {
        throw std::invalid_argument("chol: dimension must be >= 1");
    }
    const double lower = d > 1 ? -1.0 / (d - 1) : -1.0;
    if (!(rho > lower && rho <= 1.0)) {
        throw std::invalid_argument("chol: rho " + std::to_string(rho) + " outside (" +
                                    std::to_string(lower) + ", 1] for d = " + std::to_string(d));
    }

    std::vector<double> chol(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
    auto at = [&](int r, int c) -> double& {
        return chol[static_cast<std::size_t>(r) * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
    };

    if (rho == 1.0) {
        // Rank-one correlation: every row collapses onto the first component.
        for (int r = 0; r < d; ++r) {
            at(r, 0) = 1.0;
        }
        return chol;
    }

    for (int r = 0; r < d; ++r) {
        for (int c = 0; c <= r; ++c) {
            double s = (r == c) ? 1.0 : rho;
            for (int k = 0; k < c; ++k) {
                s -= at(r, k) * at(c, k);
            }
            if (r == c) {
                if (!(s > 0.0)) {
                    throw std::invalid_argument("chol: correlation matrix not positive definite at rho = " +
                                                std::to_string(rho) + ", d = " + std::to_string(d));
                }
                at(r, c) = std::sqrt(s);
            } else {
                at(r, c) = s / at(c, c);
            }
        }
    }
    return chol;
}

PathBatch::PathBatch(int paths, int steps, int dim, int assets, std::uint64_t seed)
    : paths_(paths), steps_(steps), dim_(dim), assets_(assets), seed_(seed) {
    if (paths < 1) {
        throw std::invalid_argument("method.m must be >= 1");
    }
    g_.resize(static_cast<std::size_t>(paths) * steps * dim);
    s_.resize(static_cast<std::size_t>(paths) * (steps + 1) * assets);
}

PathBatch simulate_black_scholes(const BlackScholesParams& params, const TimeGrid& grid,
                                 int paths, std::uint64_t seed, int threads) {
    params.validate();
    const int d = params.assets();
    const int n = grid.steps;
    const double h = grid.step();
    const double sqrt_h = std::sqrt(h);
    const std::vector<double> chol = chol_equicorrelation(params.corr, d);

    std::vector<double> drift(static_cast<std::size_t>(d));
    std::vector<double> diffusion(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        const double sigma = params.vol[static_cast<std::size_t>(j)];
        drift[static_cast<std::size_t>(j)] =
            (params.rate - params.div[static_cast<std::size_t>(j)] - 0.5 * sigma * sigma) * h;
        diffusion[static_cast<std::size_t>(j)] = sigma * sqrt_h;
    }

    PathBatch batch(paths, n, d, d, seed);
    const auto chunks = make_chunks(paths);
    run_tasks(chunks.size(), threads, [&](int, std::size_t c) {
        std::vector<double> correlated(static_cast<std::size_t>(d));
        for (std::int64_t i = chunks[c].begin; i < chunks[c].end; ++i) {
            Philox4x32 rng(seed, static_cast<std::uint64_t>(i));
            auto g = batch.mutable_increments(static_cast<int>(i));
            auto s = batch.mutable_spots(static_cast<int>(i));
            for (int j = 0; j < d; ++j) {
                s[static_cast<std::size_t>(j)] = params.spot[static_cast<std::size_t>(j)];
            }
            for (int k = 0; k < n; ++k) {
                double* gk = g.data() + static_cast<std::size_t>(k) * d;
                for (int j = 0; j < d; ++j) {
                    gk[j] = rng.next_normal();
                }
                for (int j = 0; j < d; ++j) {
                    double y = 0.0;
                    const double* row = chol.data() + static_cast<std::size_t>(j) * d;
                    for (int l = 0; l <= j; ++l) {
                        y += row[l] * gk[l];
                    }
                    correlated[static_cast<std::size_t>(j)] = y;
                }
                const double* prev = s.data() + static_cast<std::size_t>(k) * d;
                double* next = s.data() + static_cast<std::size_t>(k + 1) * d;
                for (int j = 0; j < d; ++j) {
                    next[j] = prev[j] * std::exp(drift[static_cast<std::size_t>(j)] +
                                                 diffusion[static_cast<std::size_t>(j)] *
                                                     correlated[static_cast<std::size_t>(j)]);
                }
            }
        }
    });
    return batch;
}

PathBatch simulate_heston(const HestonParams& params, const TimeGrid& grid,
                          int paths, std::uint64_t seed, int threads) {
    params.validate();
    const int n = grid.steps;
    const double h = grid.step();
    const double sqrt_h = std::sqrt(h);
    const double rho = params.rho;
    const double rho_perp = std::sqrt(1.0 - rho * rho);

    PathBatch batch(paths, n, 2, 1, seed);
    const auto chunks = make_chunks(paths);
    run_tasks(chunks.size(), threads, [&](int, std::size_t c) {
        for (std::int64_t i = chunks[c].begin; i < chunks[c].end; ++i) {
            Philox4x32 rng(seed, static_cast<std::uint64_t>(i));
            auto g = batch.mutable_increments(static_cast<int>(i));
            auto s = batch.mutable_spots(static_cast<int>(i));
            double log_spot = std::log(params.spot);
            double variance = params.v0;
            s[0] = params.spot;
            for (int k = 0; k < n; ++k) {
                const double g1 = rng.next_normal();
                const double g2 = rng.next_normal();
                g[static_cast<std::size_t>(2 * k)] = g1;
                g[static_cast<std::size_t>(2 * k + 1)] = g2;
                const double v_plus = variance > 0.0 ? variance : 0.0;
                const double vol = std::sqrt(v_plus);
                log_spot += (params.rate - 0.5 * v_plus) * h +
                            vol * sqrt_h * (rho * g1 + rho_perp * g2);
                variance += params.kappa * (params.theta - v_plus) * h + params.xi * vol * sqrt_h * g1;
                s[static_cast<std::size_t>(k + 1)] = std::exp(log_spot);
            }
        }
    });
    return batch;
}

} // namespace chaosdual
