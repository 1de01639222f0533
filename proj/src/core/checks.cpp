#include "core/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/basis.hpp"
#include "core/config.hpp"
#include "core/dual.hpp"
#include "core/market.hpp"
#include "core/optim.hpp"
#include "core/report.hpp"
#include "core/rng.hpp"
#include "core/runner.hpp"

namespace chaosdual {

namespace {

struct Suite {
    std::vector<CheckResult> results;

    void record(const std::string& name, bool passed, const std::string& detail) {
        results.push_back({name, passed, detail});
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

RunConfig basket_config(int degree, int steps, double spot, std::int64_t paths) {
    RunConfig cfg;
    cfg.model = ModelType::BlackScholes;
    cfg.bs = BlackScholesParams::uniform(5, spot, 0.2, 0.0, 0.05, 0.0);
    cfg.payoff_kind = PayoffKind::BasketPut;
    cfg.maturity = 3.0;
    cfg.strike = 100.0;
    cfg.steps = steps;
    cfg.method.degree = degree;
    cfg.method.paths = paths;
    cfg.method.seed = 9001;
    cfg.method.threads = 1;
    return cfg;
}

RunConfig geometric_config(int assets, double vol, double corr, int degree, std::int64_t paths) {
    RunConfig cfg;
    cfg.model = ModelType::BlackScholes;
    cfg.bs = BlackScholesParams::uniform(assets, 100.0, vol, 0.0, 0.0488, corr);
    cfg.payoff_kind = PayoffKind::GeometricPut;
    cfg.maturity = 1.0;
    cfg.strike = 100.0;
    cfg.steps = 9;
    cfg.method.degree = degree;
    cfg.method.paths = paths;
    cfg.method.seed = 9002;
    cfg.method.threads = 1;
    return cfg;
}

RunConfig max_call_config() {
    RunConfig cfg;
    cfg.model = ModelType::BlackScholes;
    cfg.bs = BlackScholesParams::uniform(2, 100.0, 0.2, 0.1, 0.05, 0.0);
    cfg.payoff_kind = PayoffKind::MaxCall;
    cfg.maturity = 3.0;
    cfg.strike = 100.0;
    cfg.steps = 9;
    cfg.method.degree = 3;
    cfg.method.paths = 20000;
    cfg.method.seed = 9003;
    cfg.method.threads = 1;
    return cfg;
}

void draw_normals(Philox4x32& rng, std::vector<double>& out) {
    for (double& v : out) {
        v = rng.next_normal();
    }
}

// --- basis statistics ------------------------------------------------------

void check_orthonormality(Suite& suite) {
    const auto basis = MultiIndexBasis::enumerate(3, 2, 2);
    const std::size_t dim = basis.size();
    const int samples = 100000;

    std::vector<double> g(static_cast<std::size_t>(basis.steps()) * basis.dim());
    std::vector<double> values(dim);
    std::vector<double> table(basis.table_size());
    const std::size_t pairs = dim * (dim + 1) / 2;
    std::vector<double> sum(pairs, 0.0);
    std::vector<double> sum_sq(pairs, 0.0);

    Philox4x32 rng(4242, 0);
    for (int s = 0; s < samples; ++s) {
        draw_normals(rng, g);
        basis.fill_hermite_table(g, table);
        basis.eval_from_table(table, 0, values);
        std::size_t t = 0;
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = a; b < dim; ++b, ++t) {
                const double prod = values[a] * values[b];
                sum[t] += prod;
                sum_sq[t] += prod * prod;
            }
        }
    }

    double worst = 0.0;
    bool ok = true;
    std::size_t t = 0;
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = a; b < dim; ++b, ++t) {
            const double mean = sum[t] / samples;
            const double var = std::max(sum_sq[t] / samples - mean * mean, 1e-30);
            const double se = std::sqrt(var / samples);
            const double target = (a == b) ? 1.0 : 0.0;
            const double pull = std::fabs(mean - target) / se;
            worst = std::max(worst, pull);
            if (pull > 5.0) {
                ok = false;
            }
        }
    }
    suite.record("orthonormality", ok, "worst |mean - target| = " + fmt(worst) + " SE");
}

void check_drop_term(Suite& suite) {
    // Averaging over resampled future increments must null every element
    // activated after the conditioning date.
    const auto basis = MultiIndexBasis::enumerate(2, 3, 2);
    const std::size_t dim = basis.size();
    const int condition_date = 1;
    const int resamples = 200000;
    const std::size_t slots = static_cast<std::size_t>(basis.steps()) * basis.dim();
    const std::size_t fixed = static_cast<std::size_t>(condition_date) * basis.dim();

    std::vector<double> g(slots);
    Philox4x32 prefix_rng(777, 0);
    draw_normals(prefix_rng, g);  // suffix gets overwritten below

    std::vector<double> values(dim);
    std::vector<double> table(basis.table_size());
    std::vector<double> sum(dim, 0.0);
    std::vector<double> sum_sq(dim, 0.0);
    Philox4x32 rng(777, 1);
    for (int s = 0; s < resamples; ++s) {
        for (std::size_t i = fixed; i < slots; ++i) {
            g[i] = rng.next_normal();
        }
        basis.fill_hermite_table(g, table);
        basis.eval_from_table(table, 0, values);
        for (std::size_t e = 0; e < dim; ++e) {
            sum[e] += values[e];
            sum_sq[e] += values[e] * values[e];
        }
    }

    double worst = 0.0;
    bool ok = true;
    for (std::size_t e = 0; e < dim; ++e) {
        if (basis.activation(e) <= condition_date) {
            continue;
        }
        const double mean = sum[e] / resamples;
        const double var = std::max(sum_sq[e] / resamples - mean * mean, 1e-30);
        const double se = std::sqrt(var / resamples);
        const double pull = std::fabs(mean) / se;
        worst = std::max(worst, pull);
        if (pull > 5.0) {
            ok = false;
        }
    }
    suite.record("drop_term", ok, "worst |mean| = " + fmt(worst) + " SE");
}

void check_martingale_increments(Suite& suite) {
    // E[M_{k+1} - M_k] = 0 for a fixed lambda under fresh increments.
    const auto basis = MultiIndexBasis::enumerate(2, 4, 1);
    const std::size_t dim = basis.size();
    const int samples = 200000;

    std::vector<double> lambda(dim);
    Philox4x32 lam_rng(31, 0);
    for (double& v : lambda) {
        v = lam_rng.next_normal();
    }

    std::vector<double> g(static_cast<std::size_t>(basis.steps()));
    std::vector<double> sum(static_cast<std::size_t>(basis.steps()), 0.0);
    std::vector<double> sum_sq(sum.size(), 0.0);
    Philox4x32 rng(31, 1);
    for (int s = 0; s < samples; ++s) {
        draw_normals(rng, g);
        const auto values = basis.eval(g);
        const auto prefix = conditional_prefix_sum(basis, values, lambda);
        for (int k = 0; k < basis.steps(); ++k) {
            const double inc = prefix[static_cast<std::size_t>(k) + 1] - prefix[static_cast<std::size_t>(k)];
            sum[static_cast<std::size_t>(k)] += inc;
            sum_sq[static_cast<std::size_t>(k)] += inc * inc;
        }
    }

    double worst = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < sum.size(); ++k) {
        const double mean = sum[k] / samples;
        const double var = std::max(sum_sq[k] / samples - mean * mean, 1e-30);
        const double pull = std::fabs(mean) / std::sqrt(var / samples);
        worst = std::max(worst, pull);
        if (pull > 5.0) {
            ok = false;
        }
    }
    suite.record("martingale_increments", ok, "worst |mean| = " + fmt(worst) + " SE");
}

// --- objective analytics ----------------------------------------------------

struct SmallProblem {
    MultiIndexBasis basis;
    PathBatch batch;
    DiscountedPayoffs payoffs;

    SmallProblem(const RunConfig& cfg)
        : basis(MultiIndexBasis::enumerate(cfg.method.degree, cfg.steps, cfg.brownian_dim())),
          batch(simulate_black_scholes(cfg.bs, cfg.grid(), static_cast<int>(cfg.method.paths),
                                       cfg.method.seed, 1)),
          payoffs(evaluate_payoffs(cfg.payoff_spec(), batch, cfg.bs.rate, cfg.grid())) {}
};

RunConfig fd_config() {
    RunConfig cfg;
    cfg.model = ModelType::BlackScholes;
    cfg.bs = BlackScholesParams::uniform(2, 100.0, 0.2, 0.0, 0.05, 0.0);
    cfg.payoff_kind = PayoffKind::BasketPut;
    cfg.maturity = 1.0;
    cfg.strike = 100.0;
    cfg.steps = 3;
    cfg.method.degree = 2;
    cfg.method.paths = 2000;
    cfg.method.seed = 555;
    cfg.method.threads = 1;
    return cfg;
}

void check_gradient_fd(Suite& suite) {
    const SmallProblem prob(fd_config());
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);
    const std::size_t dim = prob.basis.size();

    Philox4x32 rng(8080, 0);
    double worst = 0.0;
    bool ok = true;
    std::vector<double> lambda(dim);
    std::vector<double> probe(dim);
    for (int trial = 0; trial < 20; ++trial) {
        for (double& v : lambda) {
            double x = 0.2 * rng.next_normal();
            if (std::fabs(x) < 1e-3) {
                x = x < 0 ? x - 1e-3 : x + 1e-3;  // keep components away from zero
            }
            v = x;
        }
        const ObjectiveReport base = objective.evaluate(lambda);

        double err_sq = 0.0;
        double norm_sq = 0.0;
        for (std::size_t e = 0; e < dim; ++e) {
            const double h = 1e-6 * (1.0 + std::fabs(lambda[e]));
            probe = lambda;
            probe[e] = lambda[e] + h;
            const double up = objective.evaluate(probe).value;
            probe[e] = lambda[e] - h;
            const double down = objective.evaluate(probe).value;
            const double fd = (up - down) / (2.0 * h);
            const double diff = fd - base.gradient[e];
            err_sq += diff * diff;
            norm_sq += base.gradient[e] * base.gradient[e];
        }
        const double rel = std::sqrt(err_sq / std::max(norm_sq, 1e-30));
        worst = std::max(worst, rel);
        if (rel > 1e-5) {
            ok = false;
        }
    }
    suite.record("gradient_fd", ok, "worst relative error = " + fmt(worst));
}

void check_convexity(Suite& suite) {
    const SmallProblem prob(fd_config());
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);
    const std::size_t dim = prob.basis.size();

    Philox4x32 rng(8081, 0);
    bool ok = true;
    double worst = 0.0;
    std::vector<double> a(dim);
    std::vector<double> b(dim);
    std::vector<double> mix(dim);
    for (int trial = 0; trial < 100; ++trial) {
        for (std::size_t e = 0; e < dim; ++e) {
            a[e] = 0.5 * rng.next_normal();
            b[e] = 0.5 * rng.next_normal();
        }
        const double theta = rng.next_uniform();
        for (std::size_t e = 0; e < dim; ++e) {
            mix[e] = theta * a[e] + (1.0 - theta) * b[e];
        }
        const double va = objective.evaluate(a).value;
        const double vb = objective.evaluate(b).value;
        const double vm = objective.evaluate(mix).value;
        const double slack = vm - (theta * va + (1.0 - theta) * vb);
        worst = std::max(worst, slack);
        if (slack > 1e-12) {
            ok = false;
        }
    }
    suite.record("convexity", ok, "worst violation = " + fmt(worst));
}

void check_subgradient(Suite& suite) {
    const SmallProblem prob(fd_config());
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);
    const std::size_t dim = prob.basis.size();

    Philox4x32 rng(8082, 0);
    bool ok = true;
    double worst = 0.0;
    std::vector<double> lambda(dim);
    std::vector<double> shifted(dim);
    for (int trial = 0; trial < 50; ++trial) {
        for (double& v : lambda) {
            v = 0.3 * rng.next_normal();
        }
        const ObjectiveReport base = objective.evaluate(lambda);
        double inner = 0.0;
        for (std::size_t e = 0; e < dim; ++e) {
            const double step = 1e-4 * rng.next_normal();
            shifted[e] = lambda[e] + step;
            inner += base.gradient[e] * step;
        }
        const double moved = objective.evaluate(shifted).value;
        const double slack = base.value + inner - moved;
        worst = std::max(worst, slack);
        if (slack > 1e-12) {
            ok = false;
        }
    }
    suite.record("subgradient", ok, "worst violation = " + fmt(worst));
}

void check_doob_equivalence(Suite& suite) {
    // Restarting the martingale at tau0 changes pathwise maxima but not the
    // objective mean.
    RunConfig cfg = fd_config();
    cfg.method.paths = 100000;
    cfg.method.seed = 606;
    const SmallProblem prob(cfg);
    const std::size_t dim = prob.basis.size();

    std::vector<double> lambda(dim);
    Philox4x32 rng(606, 12345);
    for (double& v : lambda) {
        v = 0.3 * rng.next_normal();
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    const int m = prob.batch.paths();
    for (int i = 0; i < m; ++i) {
        const auto values = prob.basis.eval(prob.batch.increments(i));
        const auto prefix = conditional_prefix_sum(prob.basis, values, lambda);
        const int tau0 = prob.payoffs.tau0[static_cast<std::size_t>(i)];
        const auto restarted = restarted_martingale(prefix, tau0);
        const auto z = prob.payoffs.path(i);
        const double with_m = pathwise_max(z, prefix, tau0).value;
        const double with_n = pathwise_max(z, restarted, tau0).value;
        const double diff = with_m - with_n;
        sum += diff;
        sum_sq += diff * diff;
    }
    const double mean = sum / m;
    const double var = std::max(sum_sq / m - mean * mean, 1e-30);
    const double pull = std::fabs(mean) / std::sqrt(var / m);
    suite.record("doob_equivalence", pull <= 4.0, "|mean difference| = " + fmt(pull) + " SE");
}

void check_upper_bound(Suite& suite) {
    RunConfig cfg = fd_config();
    cfg.method.paths = 20000;
    const SmallProblem prob(cfg);
    DualObjective objective(prob.basis, prob.batch, prob.payoffs, 1);

    double exercise_at_tau0 = 0.0;
    for (int i = 0; i < prob.batch.paths(); ++i) {
        exercise_at_tau0 +=
            prob.payoffs.path(i)[static_cast<std::size_t>(prob.payoffs.tau0[static_cast<std::size_t>(i)])];
    }
    exercise_at_tau0 /= prob.batch.paths();

    // At lambda = 0 and after a short descent, the dual value dominates the
    // immediate-exercise lower bound.
    DescentConfig descent;
    descent.anchor = european_anchor(prob.payoffs);
    descent.max_iters = 25;
    const MinimizeResult opt = minimize(objective, descent);
    const std::vector<double> zero(prob.basis.size(), 0.0);
    const ObjectiveReport at_zero = objective.evaluate(zero);

    const bool ok0 = at_zero.value + 3.0 * at_zero.std_error >= exercise_at_tau0;
    const bool ok1 = opt.value + 3.0 * opt.std_error >= exercise_at_tau0;
    suite.record("upper_bound", ok0 && ok1,
                 "dual " + fmt(opt.value) + " vs immediate exercise " + fmt(exercise_at_tau0));
}

// --- optimizer behaviour -----------------------------------------------------

void check_descent(Suite& suite, const std::string& name, const RunConfig& cfg) {
    const PricingRun run = price_with_details(cfg);
    bool decreasing = true;
    for (std::size_t i = 1; i < run.opt.trace.accepted.size(); ++i) {
        if (!(run.opt.trace.accepted[i].value < run.opt.trace.accepted[i - 1].value)) {
            decreasing = false;
        }
    }
    const bool floor_ok = run.opt.value >= run.european - 3.0 * run.opt.std_error;
    suite.record(name, decreasing && floor_ok,
                 "price " + fmt(run.opt.value) + ", european " + fmt(run.european) + ", " +
                     std::to_string(run.opt.evaluations) + " evaluations");
}

void check_iteration_budget(Suite& suite) {
    const RunConfig cfg = basket_config(2, 3, 100.0, 20000);
    const PricingRun run = price_with_details(cfg);
    const bool ok = run.opt.evaluations >= 3 && run.opt.evaluations <= 60;
    suite.record("iteration_budget", ok,
                 std::to_string(run.opt.evaluations) + " objective evaluations");
}

void check_saa_stability(Suite& suite) {
    RunConfig small = basket_config(2, 3, 100.0, 20000);
    RunConfig large = basket_config(2, 3, 100.0, 40000);
    const PricingRun a = price_with_details(small);
    const PricingRun b = price_with_details(large);
    const double combined = std::sqrt(a.opt.std_error * a.opt.std_error +
                                      b.opt.std_error * b.opt.std_error);
    const double gap = std::fabs(a.opt.value - b.opt.value);
    suite.record("saa_stability", gap < 4.0 * combined,
                 "gap " + fmt(gap) + " vs 4 SE = " + fmt(4.0 * combined));
}

void check_thread_determinism(Suite& suite) {
    RunConfig cfg = geometric_config(2, 0.2, 0.0, 2, 5000);
    const PricingRun a = price_with_details(cfg, 1);
    const PricingRun b = price_with_details(cfg, 2);
    const PricingRun c = price_with_details(cfg, 4);
    const bool ok = a.opt.value == b.opt.value && a.opt.value == c.opt.value;
    suite.record("thread_determinism", ok,
                 ok ? "identical prices at 1/2/4 threads" : "prices differ across thread counts");
}

} // namespace

std::vector<CheckResult> run_property_suite() {
    Suite suite;
    check_orthonormality(suite);
    check_drop_term(suite);
    check_martingale_increments(suite);
    check_gradient_fd(suite);
    check_convexity(suite);
    check_subgradient(suite);
    check_doob_equivalence(suite);
    check_upper_bound(suite);
    check_descent(suite, "descent_basket_p2", basket_config(2, 3, 100.0, 20000));
    check_descent(suite, "descent_basket_p3", basket_config(3, 3, 100.0, 20000));
    check_descent(suite, "descent_basket_otm", basket_config(2, 3, 110.0, 20000));
    check_descent(suite, "descent_geometric_d2", geometric_config(2, 0.2, 0.0, 3, 5000));
    check_descent(suite, "descent_geometric_d10", geometric_config(10, 0.3, 0.1, 2, 20000));
    check_descent(suite, "descent_max_call", max_call_config());
    check_iteration_budget(suite);
    check_saa_stability(suite);
    check_thread_determinism(suite);
    return suite.results;
}

} // namespace chaosdual
