// Command-line front end. Links the public C API only.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chaosdual.h"

namespace {

int exit_code_for(cd_status status) {
    switch (status) {
    case CD_OK: return 0;
    case CD_ERR_CONFIG: return 2;
    default: return 3;
    }
}

[[noreturn]] void die(cd_status status) {
    std::fprintf(stderr, "error: %s\n", cd_last_error());
    std::exit(exit_code_for(status));
}

struct Overrides {
    std::optional<int> degree;
    std::optional<int> steps;
    std::optional<long long> paths;
    std::optional<unsigned long long> seed;
    std::optional<int> threads;
    std::optional<double> epsilon;
    std::optional<std::string> out;

    void add_flags(CLI::App* cmd, bool with_threads = true) {
        cmd->add_option("--p", degree, "Chaos expansion degree (method.p)");
        cmd->add_option("--n", steps, "Number of exercise steps (contract.n)");
        cmd->add_option("--m", paths, "Number of simulated paths (method.m)");
        cmd->add_option("--seed", seed, "RNG seed (method.seed)");
        if (with_threads) {
            cmd->add_option("--threads", threads, "Worker threads, 0 = all cores (method.threads)");
        }
        cmd->add_option("--epsilon", epsilon, "Relative-improvement stop (method.epsilon)");
        cmd->add_option("--out", out, "Report output path (output.report)");
    }

    void apply(cd_config* cfg) const {
        set_if(cfg, "method.p", degree);
        set_if(cfg, "contract.n", steps);
        set_if(cfg, "method.m", paths);
        set_if(cfg, "method.seed", seed);
        set_if(cfg, "method.threads", threads);
        set_if(cfg, "method.epsilon", epsilon);
        if (out) {
            set_key(cfg, "output.report", *out);
        }
    }

private:
    template <typename T>
    static void set_if(cd_config* cfg, const char* key, const std::optional<T>& value) {
        if (!value) {
            return;
        }
        std::ostringstream os;
        os.precision(17);
        os << *value;
        set_key(cfg, key, os.str());
    }

    static void set_key(cd_config* cfg, const char* key, const std::string& value) {
        const cd_status status = cd_config_set(cfg, key, value.c_str());
        if (status != CD_OK) {
            die(status);
        }
    }
};

cd_config* load_config(const std::string& path, const Overrides& overrides) {
    cd_config* cfg = nullptr;
    const cd_status status = cd_config_load(path.c_str(), &cfg);
    if (status != CD_OK) {
        die(status);
    }
    overrides.apply(cfg);
    return cfg;
}

void print_report(const cd_report* report) {
    std::fputs(cd_report_text(report), stdout);
}

std::vector<int> parse_thread_list(const std::string& text) {
    std::vector<int> counts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        counts.push_back(std::stoi(item));
    }
    return counts;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual upper-bound pricer for Bermudan options (chaos-expansion martingales)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string bench_threads = "1";
    Overrides overrides;

    auto* price = app.add_subcommand("price", "Price a contract from a config file");
    price->add_option("config", config_path, "Run configuration file")->required();
    overrides.add_flags(price);

    auto* oracle = app.add_subcommand("oracle", "Reference prices via the 1-D reduction and a binomial tree");
    oracle->add_option("config", config_path, "Run configuration file")->required();
    overrides.add_flags(oracle);

    auto* bench = app.add_subcommand("bench", "Scaling benchmark across thread counts");
    bench->add_option("config", config_path, "Run configuration file")->required();
    bench->add_option("--threads", bench_threads, "Comma-separated thread counts, e.g. 1,2,4");
    overrides.add_flags(bench, /*with_threads=*/false);

    auto* check = app.add_subcommand("check", "Run the statistical invariant suite");
    (void)check;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    cd_report* report = nullptr;
    cd_status status = CD_OK;

    if (price->parsed()) {
        cd_config* cfg = load_config(config_path, overrides);
        status = cd_run_price(cfg, &report);
        cd_config_free(cfg);
    } else if (oracle->parsed()) {
        cd_config* cfg = load_config(config_path, overrides);
        status = cd_run_oracle(cfg, &report);
        cd_config_free(cfg);
    } else if (bench->parsed()) {
        const std::vector<int> counts = parse_thread_list(bench_threads);
        if (counts.empty()) {
            std::fprintf(stderr, "error: bench requires at least one thread count\n");
            return 2;
        }
        cd_config* cfg = load_config(config_path, overrides);
        status = cd_run_bench(cfg, counts.data(), static_cast<int>(counts.size()), &report);
        cd_config_free(cfg);
    } else {
        status = cd_run_check(&report);
        if (status == CD_OK) {
            print_report(report);
            const char* failed = cd_report_get(report, "failed");
            const bool all_passed = failed != nullptr && std::string(failed) == "0";
            cd_report_free(report);
            return all_passed ? 0 : 3;
        }
    }

    if (status != CD_OK) {
        if (report != nullptr) {
            cd_report_free(report);
        }
        die(status);
    }
    print_report(report);
    cd_report_free(report);
    return 0;
}
