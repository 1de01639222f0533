#include "chaosdual.h"

#include <new>
#include <span>
#include <string>

#include "core/basis.hpp"
#include "core/checks.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/report.hpp"
#include "core/runner.hpp"

using chaosdual::ConfigError;
using chaosdual::NumericError;
using chaosdual::Report;
using chaosdual::RunConfig;

struct cd_config {
    RunConfig cfg;
};

struct cd_report {
    Report report;
    mutable std::string text_cache;
};

namespace {

thread_local std::string g_last_error;

void clear_error() {
    g_last_error.clear();
}

cd_status fail(cd_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
cd_status guarded(Fn&& fn) {
    clear_error();
    try {
        return fn();
    } catch (const ConfigError& e) {
        return fail(CD_ERR_CONFIG, e.what());
    } catch (const NumericError& e) {
        return fail(CD_ERR_NUMERIC, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CD_ERR_CONFIG, e.what());
    } catch (const std::overflow_error& e) {
        return fail(CD_ERR_CONFIG, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CD_ERR_NUMERIC, "out of memory");
    } catch (const std::exception& e) {
        return fail(CD_ERR_NUMERIC, e.what());
    }
}

cd_status make_report(Report&& report, cd_report** out) {
    *out = new cd_report{std::move(report), {}};
    return CD_OK;
}

} // namespace

extern "C" {

cd_status cd_config_load(const char* path, cd_config** out) {
    if (path == nullptr || out == nullptr) {
        return fail(CD_ERR_BADARG, "cd_config_load: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto cfg = RunConfig::load(path);
        cfg.validate();
        *out = new cd_config{std::move(cfg)};
        return CD_OK;
    });
}

cd_status cd_config_parse(const char* text, cd_config** out) {
    if (text == nullptr || out == nullptr) {
        return fail(CD_ERR_BADARG, "cd_config_parse: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto cfg = RunConfig::parse(text);
        cfg.validate();
        *out = new cd_config{std::move(cfg)};
        return CD_OK;
    });
}

cd_status cd_config_set(cd_config* cfg, const char* dotted_key, const char* value) {
    if (cfg == nullptr || dotted_key == nullptr || value == nullptr) {
        return fail(CD_ERR_BADARG, "cd_config_set: null argument");
    }
    return guarded([&] {
        RunConfig updated = cfg->cfg;
        updated.override_key(dotted_key, value);
        updated.validate();
        cfg->cfg = std::move(updated);
        return CD_OK;
    });
}

void cd_config_free(cd_config* cfg) {
    delete cfg;
}

cd_status cd_run_price(const cd_config* cfg, cd_report** out) {
    if (cfg == nullptr || out == nullptr) {
        return fail(CD_ERR_BADARG, "cd_run_price: null argument");
    }
    *out = nullptr;
    return guarded([&] { return make_report(chaosdual::run_price(cfg->cfg), out); });
}

cd_status cd_run_oracle(const cd_config* cfg, cd_report** out) {
    if (cfg == nullptr || out == nullptr) {
        return fail(CD_ERR_BADARG, "cd_run_oracle: null argument");
    }
    *out = nullptr;
    return guarded([&] { return make_report(chaosdual::run_oracle(cfg->cfg), out); });
}

cd_status cd_run_bench(const cd_config* cfg, const int* thread_counts, int count,
                       cd_report** out) {
    if (cfg == nullptr || out == nullptr || thread_counts == nullptr || count < 1) {
        return fail(CD_ERR_BADARG, "cd_run_bench: null argument or empty thread list");
    }
    *out = nullptr;
    return guarded([&] {
        const std::span<const int> counts{thread_counts, static_cast<std::size_t>(count)};
        return make_report(chaosdual::run_bench(cfg->cfg, counts), out);
    });
}

cd_status cd_run_check(cd_report** out) {
    if (out == nullptr) {
        return fail(CD_ERR_BADARG, "cd_run_check: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        Report report;
        report.set("command", "check");
        const auto results = chaosdual::run_property_suite();
        int passed = 0;
        for (const auto& r : results) {
            report.set(r.name, r.passed);
            report.set(r.name + ".detail", r.detail);
            passed += r.passed ? 1 : 0;
        }
        report.set("passed", static_cast<std::int64_t>(passed));
        report.set("failed", static_cast<std::int64_t>(results.size()) - passed);
        return make_report(std::move(report), out);
    });
}

int cd_report_size(const cd_report* rep) {
    return rep == nullptr ? 0 : static_cast<int>(rep->report.entries().size());
}

const char* cd_report_key(const cd_report* rep, int index) {
    if (rep == nullptr || index < 0 || index >= cd_report_size(rep)) {
        return nullptr;
    }
    return rep->report.entries()[static_cast<std::size_t>(index)].first.c_str();
}

const char* cd_report_value(const cd_report* rep, int index) {
    if (rep == nullptr || index < 0 || index >= cd_report_size(rep)) {
        return nullptr;
    }
    return rep->report.entries()[static_cast<std::size_t>(index)].second.c_str();
}

const char* cd_report_get(const cd_report* rep, const char* key) {
    if (rep == nullptr || key == nullptr) {
        return nullptr;
    }
    const std::string* value = rep->report.find(key);
    return value == nullptr ? nullptr : value->c_str();
}

const char* cd_report_text(const cd_report* rep) {
    if (rep == nullptr) {
        return nullptr;
    }
    rep->text_cache = rep->report.to_text();
    return rep->text_cache.c_str();
}

cd_status cd_report_write(const cd_report* rep, const char* path) {
    if (rep == nullptr || path == nullptr) {
        return fail(CD_ERR_BADARG, "cd_report_write: null argument");
    }
    return guarded([&] {
        try {
            rep->report.write_file(path);
        } catch (const NumericError& e) {
            return fail(CD_ERR_IO, e.what());
        }
        return CD_OK;
    });
}

void cd_report_free(cd_report* rep) {
    delete rep;
}

cd_status cd_basis_size(int p, int n, int d, unsigned long long* out) {
    if (out == nullptr) {
        return fail(CD_ERR_BADARG, "cd_basis_size: null argument");
    }
    *out = 0;
    return guarded([&] {
        *out = chaosdual::basis_cardinality(p, n, d);
        return CD_OK;
    });
}

const char* cd_last_error(void) {
    return g_last_error.c_str();
}

const char* cd_version(void) {
    return "0.1.0";
}

} // extern "C"
