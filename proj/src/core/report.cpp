#include "core/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "core/errors.hpp"

namespace chaosdual {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void Report::set(const std::string& key, const std::string& value) {
    for (auto& entry : entries_) {
        if (entry.first == key) {
            entry.second = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void Report::set(const std::string& key, double value) {
    set(key, format_double(value));
}

void Report::set(const std::string& key, std::int64_t value) {
    set(key, std::to_string(value));
}

void Report::set(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
}

const std::string* Report::find(const std::string& key) const {
    for (const auto& entry : entries_) {
        if (entry.first == key) {
            return &entry.second;
        }
    }
    return nullptr;
}

const std::string& Report::get(const std::string& key) const {
    if (const auto* v = find(key)) {
        return *v;
    }
    throw std::out_of_range("report: missing field '" + key + "'");
}

double Report::get_double(const std::string& key) const {
    return std::stod(get(key));
}

std::int64_t Report::get_int(const std::string& key) const {
    return std::stoll(get(key));
}

std::string Report::to_text() const {
    std::string out;
    for (const auto& entry : entries_) {
        out += entry.first;
        out += " = ";
        out += entry.second;
        out += '\n';
    }
    return out;
}

Report Report::parse(const std::string& text) {
    Report report;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) {
            throw std::invalid_argument("report: malformed line '" + line + "'");
        }
        report.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    return report;
}

void Report::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw NumericError("cannot write report file '" + path + "'");
    }
    out << to_text();
    if (!out) {
        throw NumericError("failed while writing report file '" + path + "'");
    }
}

Report Report::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open report file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

} // namespace chaosdual
