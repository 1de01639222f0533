#include "core/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "core/basis.hpp"
#include "core/errors.hpp"

namespace chaosdual {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ConfigError(key + ": empty entry in list '" + value + "'");
        }
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) {
        throw ConfigError(key + ": empty list");
    }
    return out;
}

// Scalar value broadcast to `count` entries, or a comma list of exactly `count`.
std::vector<double> parse_broadcast(const std::string& key, const std::string& value, int count) {
    std::vector<double> list = parse_list(key, value);
    if (static_cast<int>(list.size()) == 1 && count > 1) {
        list.assign(static_cast<std::size_t>(count), list[0]);
    }
    if (static_cast<int>(list.size()) != count) {
        throw ConfigError(key + ": expected 1 or " + std::to_string(count) +
                          " entries, got " + std::to_string(list.size()));
    }
    return list;
}

struct RawEntry {
    std::string section;
    std::string key;
    std::string value;
    bool used = false;
};

std::vector<RawEntry> tokenize(const std::string& text) {
    std::vector<RawEntry> entries;
    std::string section;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') {
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header '" + t + "'");
            }
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) {
                throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + t + "'");
        }
        RawEntry entry;
        entry.section = section;
        entry.key = trim(t.substr(0, eq));
        entry.value = trim(t.substr(eq + 1));
        if (entry.key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

class EntryView {
public:
    explicit EntryView(std::vector<RawEntry>& entries) : entries_(entries) {}

    const std::string* take(const std::string& section, const std::string& key) {
        const std::string* found = nullptr;
        for (auto& e : entries_) {
            if (e.section == section && e.key == key) {
                if (found) {
                    throw ConfigError(dotted(section, key) + ": duplicate key");
                }
                e.used = true;
                found = &e.value;
            }
        }
        return found;
    }

    void reject_unused() const {
        for (const auto& e : entries_) {
            if (!e.used) {
                throw ConfigError("unknown key '" + dotted(e.section, e.key) + "'");
            }
        }
    }

    static std::string dotted(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

private:
    std::vector<RawEntry>& entries_;
};

void apply_model(RunConfig& cfg, EntryView& view) {
    std::string type = "black_scholes";
    if (const auto* v = view.take("model", "type")) {
        type = *v;
    }
    if (type == "black_scholes") {
        cfg.model = ModelType::BlackScholes;
        int d = 1;
        if (const auto* v = view.take("model", "d")) {
            d = static_cast<int>(parse_int("model.d", *v));
        }
        if (d < 1) {
            throw ConfigError("model.d must be >= 1");
        }
        cfg.bs.spot.assign(static_cast<std::size_t>(d), 100.0);
        cfg.bs.vol.assign(static_cast<std::size_t>(d), 0.2);
        cfg.bs.div.assign(static_cast<std::size_t>(d), 0.0);
        if (const auto* v = view.take("model", "spot")) {
            cfg.bs.spot = parse_broadcast("model.spot", *v, d);
        }
        if (const auto* v = view.take("model", "vol")) {
            cfg.bs.vol = parse_broadcast("model.vol", *v, d);
        }
        if (const auto* v = view.take("model", "div")) {
            cfg.bs.div = parse_broadcast("model.div", *v, d);
        }
        if (const auto* v = view.take("model", "rate")) {
            cfg.bs.rate = parse_double("model.rate", *v);
        }
        if (const auto* v = view.take("model", "rho")) {
            cfg.bs.corr = parse_double("model.rho", *v);
        }
    } else if (type == "heston") {
        cfg.model = ModelType::Heston;
        if (const auto* v = view.take("model", "spot")) {
            cfg.heston.spot = parse_double("model.spot", *v);
        }
        if (const auto* v = view.take("model", "rate")) {
            cfg.heston.rate = parse_double("model.rate", *v);
        }
        if (const auto* v = view.take("model", "v0")) {
            cfg.heston.v0 = parse_double("model.v0", *v);
        }
        if (const auto* v = view.take("model", "kappa")) {
            cfg.heston.kappa = parse_double("model.kappa", *v);
        }
        if (const auto* v = view.take("model", "theta")) {
            cfg.heston.theta = parse_double("model.theta", *v);
        }
        if (const auto* v = view.take("model", "xi")) {
            cfg.heston.xi = parse_double("model.xi", *v);
        }
        if (const auto* v = view.take("model", "rho")) {
            cfg.heston.rho = parse_double("model.rho", *v);
        }
    } else {
        throw ConfigError("model.type: unknown model '" + type + "'");
    }
}

void apply_scalar_sections(RunConfig& cfg, EntryView& view) {
    if (const auto* v = view.take("", "comment")) {
        cfg.comment = *v;
    }
    if (const auto* v = view.take("payoff", "kind")) {
        cfg.payoff_kind = payoff_kind_from_string(*v);
    }
    if (const auto* v = view.take("payoff", "weights")) {
        cfg.weights = parse_list("payoff.weights", *v);
    }
    if (const auto* v = view.take("contract", "T")) {
        cfg.maturity = parse_double("contract.T", *v);
    }
    if (const auto* v = view.take("contract", "K")) {
        cfg.strike = parse_double("contract.K", *v);
    }
    if (const auto* v = view.take("contract", "n")) {
        cfg.steps = static_cast<int>(parse_int("contract.n", *v));
    }
    if (const auto* v = view.take("method", "p")) {
        cfg.method.degree = static_cast<int>(parse_int("method.p", *v));
    }
    if (const auto* v = view.take("method", "m")) {
        cfg.method.paths = parse_int("method.m", *v);
    }
    if (const auto* v = view.take("method", "seed")) {
        cfg.method.seed = parse_uint("method.seed", *v);
    }
    if (const auto* v = view.take("method", "threads")) {
        cfg.method.threads = static_cast<int>(parse_int("method.threads", *v));
    }
    if (const auto* v = view.take("method", "epsilon")) {
        cfg.method.epsilon = parse_double("method.epsilon", *v);
    }
    if (const auto* v = view.take("method", "max_iters")) {
        cfg.method.max_iters = static_cast<int>(parse_int("method.max_iters", *v));
    }
    if (const auto* v = view.take("method", "chunk_size")) {
        cfg.method.chunk_size = parse_int("method.chunk_size", *v);
    }
    if (const auto* v = view.take("method", "tree_steps")) {
        cfg.method.tree_steps = static_cast<int>(parse_int("method.tree_steps", *v));
    }
    if (const auto* v = view.take("output", "report")) {
        cfg.output.report_path = *v;
    }
    if (const auto* v = view.take("output", "trace")) {
        cfg.output.trace_path = *v;
    }
}

} // namespace

RunConfig RunConfig::parse(const std::string& text) {
    std::vector<RawEntry> entries = tokenize(text);
    EntryView view(entries);
    RunConfig cfg;
    try {
        apply_model(cfg, view);
        apply_scalar_sections(cfg, view);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    view.reject_unused();
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void RunConfig::override_key(const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    const std::string section = dot == std::string::npos ? "" : dotted_key.substr(0, dot);
    const std::string key = dot == std::string::npos ? dotted_key : dotted_key.substr(dot + 1);
    std::vector<RawEntry> entries{{section, key, value, false}};
    EntryView view(entries);
    try {
        if (section == "model") {
            // Model overrides are re-applied on top of the current values;
            // the asset count and type stay fixed.
            if (model == ModelType::BlackScholes) {
                const int d = bs.assets();
                if (key == "spot") {
                    bs.spot = parse_broadcast("model.spot", value, d);
                } else if (key == "vol") {
                    bs.vol = parse_broadcast("model.vol", value, d);
                } else if (key == "div") {
                    bs.div = parse_broadcast("model.div", value, d);
                } else if (key == "rate") {
                    bs.rate = parse_double("model.rate", value);
                } else if (key == "rho") {
                    bs.corr = parse_double("model.rho", value);
                } else {
                    throw ConfigError("unknown key 'model." + key + "'");
                }
            } else {
                apply_model(*this, view);
                view.reject_unused();
            }
            return;
        }
        apply_scalar_sections(*this, view);
        view.reject_unused();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

int RunConfig::assets() const {
    return model == ModelType::BlackScholes ? bs.assets() : 1;
}

int RunConfig::brownian_dim() const {
    return model == ModelType::BlackScholes ? bs.assets() : 2;
}

PayoffSpec RunConfig::payoff_spec() const {
    PayoffSpec spec;
    spec.kind = payoff_kind;
    spec.strike = strike;
    spec.weights = weights;
    return spec;
}

int RunConfig::resolved_tree_steps() const {
    if (method.tree_steps > 0) {
        return method.tree_steps;
    }
    // About 9000 levels, rounded up to keep exercise dates on tree levels.
    const int per_date = (9000 + steps - 1) / steps;
    return per_date * steps;
}

void RunConfig::validate() const {
    try {
        if (model == ModelType::BlackScholes) {
            bs.validate();
        } else {
            heston.validate();
        }
        const TimeGrid g = grid();
        (void)g;
        payoff_spec().validate(assets());
        if (method.degree < 1) {
            throw std::invalid_argument("method.p must be >= 1");
        }
        if (method.paths < 1) {
            throw std::invalid_argument("method.m must be >= 1");
        }
        if (method.threads < 0) {
            throw std::invalid_argument("method.threads must be >= 0");
        }
        if (!(method.epsilon > 0.0)) {
            throw std::invalid_argument("method.epsilon must be > 0");
        }
        if (method.max_iters < 1) {
            throw std::invalid_argument("method.max_iters must be >= 1");
        }
        if (method.chunk_size < 0) {
            throw std::invalid_argument("method.chunk_size must be >= 0");
        }
        if (method.tree_steps != 0 && method.tree_steps % steps != 0) {
            throw std::invalid_argument("method.tree_steps must be a multiple of contract.n");
        }
        // Surfaces oversized basis requests before any simulation starts.
        (void)basis_cardinality(method.degree, steps, brownian_dim());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

} // namespace chaosdual
