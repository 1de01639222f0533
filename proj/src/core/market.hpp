#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace chaosdual {

/// Uniform exercise grid t_k = k*T/n, k = 0..n.
struct TimeGrid {
    double maturity = 0.0;
    int steps = 0;

    TimeGrid(double maturity_years, int step_count);

    double step() const { return maturity / steps; }
    double date(int k) const { return maturity * k / steps; }
};

struct BlackScholesParams {
    std::vector<double> spot;
    std::vector<double> vol;
    std::vector<double> div;
    double rate = 0.0;
    double corr = 0.0;

    int assets() const { return static_cast<int>(spot.size()); }
    void validate() const;

    static BlackScholesParams uniform(int assets, double spot, double vol, double div,
                                      double rate, double corr);
};

struct HestonParams {
    double spot = 0.0;
    double rate = 0.0;
    double v0 = 0.0;
    double kappa = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    double rho = 0.0;

    void validate() const;
};

/// Lower-triangular L with L L' equal to the equicorrelation matrix
/// (1 on the diagonal, rho elsewhere), row-major d*d. rho in (-1/(d-1), 1].
std::vector<double> chol_equicorrelation(double rho, int d);

/// Simulated batch: standardized Brownian increments (m x n x d, slot order
/// matching MultiIndexBasis) plus asset paths (m x (n+1) x assets).
/// Immutable after construction.
class PathBatch {
public:
    PathBatch(int paths, int steps, int dim, int assets, std::uint64_t seed);

    int paths() const { return paths_; }
    int steps() const { return steps_; }
    int dim() const { return dim_; }
    int assets() const { return assets_; }
    std::uint64_t seed() const { return seed_; }

    std::span<const double> increments(int path) const {
        const std::size_t len = static_cast<std::size_t>(steps_) * dim_;
        return {g_.data() + static_cast<std::size_t>(path) * len, len};
    }
    std::span<const double> spots(int path) const {
        const std::size_t len = static_cast<std::size_t>(steps_ + 1) * assets_;
        return {s_.data() + static_cast<std::size_t>(path) * len, len};
    }
    double spot(int path, int date, int asset) const {
        return spots(path)[static_cast<std::size_t>(date) * assets_ + asset];
    }

    std::span<double> mutable_increments(int path) {
        const std::size_t len = static_cast<std::size_t>(steps_) * dim_;
        return {g_.data() + static_cast<std::size_t>(path) * len, len};
    }
    std::span<double> mutable_spots(int path) {
        const std::size_t len = static_cast<std::size_t>(steps_ + 1) * assets_;
        return {s_.data() + static_cast<std::size_t>(path) * len, len};
    }

private:
    int paths_;
    int steps_;
    int dim_;
    int assets_;
    std::uint64_t seed_;
    std::vector<double> g_;
    std::vector<double> s_;
};

/// Exact lognormal stepping on the uniform grid; one Brownian component per
/// asset, correlated through the equicorrelation Cholesky factor. Each path
/// draws from its own counter-based stream, so the batch is bitwise
/// reproducible for any thread count.
PathBatch simulate_black_scholes(const BlackScholesParams& params, const TimeGrid& grid,
                                 int paths, std::uint64_t seed, int threads = 1);

/// Full-truncation Euler on the variance, log-Euler on the spot. Two Brownian
/// components: the first drives the variance, the mix rho*W1 + sqrt(1-rho^2)*W2
/// drives the spot.
PathBatch simulate_heston(const HestonParams& params, const TimeGrid& grid,
                          int paths, std::uint64_t seed, int threads = 1);

} // namespace chaosdual
