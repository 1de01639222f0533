#include "core/runner.hpp"

#include <chrono>
#include <fstream>
#include <string>

#include "core/basis.hpp"
#include "core/dual.hpp"
#include "core/errors.hpp"
#include "core/oracle.hpp"

namespace chaosdual {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

PathBatch simulate(const RunConfig& config, int threads) {
    const TimeGrid grid = config.grid();
    if (config.model == ModelType::BlackScholes) {
        return simulate_black_scholes(config.bs, grid, static_cast<int>(config.method.paths),
                                      config.method.seed, threads);
    }
    return simulate_heston(config.heston, grid, static_cast<int>(config.method.paths),
                           config.method.seed, threads);
}

double rate_of(const RunConfig& config) {
    return config.model == ModelType::BlackScholes ? config.bs.rate : config.heston.rate;
}

void write_trace_csv(const std::string& path, const DescentTrace& trace) {
    std::ofstream out(path);
    if (!out) {
        throw NumericError("cannot write trace file '" + path + "'");
    }
    out << "iteration,value,step,gamma\n";
    int iter = 1;
    for (const auto& rec : trace.accepted) {
        out << iter++ << ',' << format_double(rec.value) << ',' << format_double(rec.step)
            << ',' << format_double(rec.gamma) << '\n';
    }
}

void fill_common_fields(Report& report, const RunConfig& config) {
    report.set("model", config.model == ModelType::BlackScholes ? "black_scholes" : "heston");
    report.set("payoff", to_string(config.payoff_kind));
    report.set("d", config.assets());
    report.set("T", config.maturity);
    report.set("K", config.strike);
    report.set("n", config.steps);
    if (!config.comment.empty()) {
        report.set("comment", config.comment);
    }
}

} // namespace

PricingRun price_with_details(const RunConfig& config, int threads_override) {
    config.validate();
    const int threads = threads_override >= 0 ? threads_override : config.method.threads;

    PricingRun run;
    const auto t0 = Clock::now();
    const PathBatch batch = simulate(config, threads);
    const DiscountedPayoffs payoffs =
        evaluate_payoffs(config.payoff_spec(), batch, rate_of(config), config.grid());
    run.time_simulate = seconds_since(t0);

    const auto t1 = Clock::now();
    const MultiIndexBasis basis =
        MultiIndexBasis::enumerate(config.method.degree, config.steps, batch.dim());
    run.basis_size = basis.size();
    run.european = european_anchor(payoffs);

    DualObjective objective(basis, batch, payoffs, threads, config.method.chunk_size);
    DescentConfig descent;
    descent.epsilon = config.method.epsilon;
    descent.max_iters = config.method.max_iters;
    descent.anchor = run.european;
    run.opt = minimize(objective, descent);
    run.time_optimize = seconds_since(t1);
    return run;
}

Report run_price(const RunConfig& config) {
    const PricingRun run = price_with_details(config);

    Report report;
    report.set("command", "price");
    fill_common_fields(report, config);
    report.set("p", config.method.degree);
    report.set("m", config.method.paths);
    report.set("seed", config.method.seed);
    report.set("threads", config.method.threads);
    report.set("basis_size", run.basis_size);
    report.set("price", run.opt.value);
    report.set("std_error", run.opt.std_error);
    report.set("european", run.european);
    report.set("iterations", run.opt.iterations);
    report.set("evaluations", run.opt.evaluations);
    report.set("rejections", run.opt.trace.rejections);
    report.set("time_simulate", run.time_simulate);
    report.set("time_optimize", run.time_optimize);

    if (!config.output.trace_path.empty()) {
        write_trace_csv(config.output.trace_path, run.opt.trace);
    }
    if (!config.output.report_path.empty()) {
        report.write_file(config.output.report_path);
    }
    return report;
}

Report run_oracle(const RunConfig& config) {
    config.validate();
    if (config.model != ModelType::BlackScholes) {
        throw ConfigError("oracle: reduction undefined for this model");
    }
    const bool one_dimensional_put =
        config.bs.assets() == 1 &&
        (config.payoff_kind == PayoffKind::BasketPut || config.payoff_kind == PayoffKind::MinPut ||
         config.payoff_kind == PayoffKind::GeometricPut);
    if (config.payoff_kind != PayoffKind::GeometricPut && !one_dimensional_put) {
        throw ConfigError("oracle: reduction undefined for payoff '" +
                          to_string(config.payoff_kind) + "'");
    }

    const ReducedParams reduced = geometric_reduction(config.bs);
    const TimeGrid grid = config.grid();
    const int tree_steps = config.resolved_tree_steps();

    Report report;
    report.set("command", "oracle");
    fill_common_fields(report, config);
    report.set("reduced_spot", reduced.spot);
    report.set("reduced_vol", reduced.vol);
    report.set("reduced_div", reduced.div);
    report.set("tree_steps", tree_steps);
    report.set("bermudan_price",
               binomial_put(reduced, config.bs.rate, config.strike, grid, tree_steps,
                            ExerciseStyle::Bermudan));
    report.set("american_price",
               binomial_put(reduced, config.bs.rate, config.strike, grid, tree_steps,
                            ExerciseStyle::American));
    report.set("european_price",
               bs_european_put(reduced.spot, reduced.vol, config.bs.rate, reduced.div,
                               config.maturity, config.strike));

    if (!config.output.report_path.empty()) {
        report.write_file(config.output.report_path);
    }
    return report;
}

Report run_bench(const RunConfig& config, std::span<const int> thread_counts) {
    config.validate();
    if (thread_counts.empty()) {
        throw ConfigError("bench: at least one thread count required");
    }
    for (int t : thread_counts) {
        if (t < 1) {
            throw ConfigError("bench: thread counts must be >= 1");
        }
    }

    Report report;
    report.set("command", "bench");
    fill_common_fields(report, config);
    report.set("p", config.method.degree);
    report.set("m", config.method.paths);
    report.set("seed", config.method.seed);

    double base_time = 0.0;
    int base_threads = 0;
    std::string base_price;
    for (std::size_t i = 0; i < thread_counts.size(); ++i) {
        const int t = thread_counts[i];
        const auto t0 = Clock::now();
        const PricingRun run = price_with_details(config, t);
        const double elapsed = seconds_since(t0);
        const std::string price = format_double(run.opt.value);

        if (i == 0) {
            base_time = elapsed;
            base_threads = t;
            base_price = price;
            report.set("price", run.opt.value);
            report.set("std_error", run.opt.std_error);
        } else if (price != base_price) {
            throw NumericError("bench: price mismatch across thread counts (" +
                               std::to_string(base_threads) + " -> " + base_price + ", " +
                               std::to_string(t) + " -> " + price + ")");
        }

        // Baseline is the first listed count (normally 1 thread).
        const std::string prefix = "threads_" + std::to_string(t);
        report.set(prefix + ".time", elapsed);
        report.set(prefix + ".speedup", base_time / elapsed);
        report.set(prefix + ".efficiency", base_time * base_threads / (elapsed * t));
    }

    if (!config.output.report_path.empty()) {
        report.write_file(config.output.report_path);
    }
    return report;
}

} // namespace chaosdual
