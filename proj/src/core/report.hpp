#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace chaosdual {

/// Ordered key/value report. Values are stored as strings (doubles rendered
/// with 17 significant digits) so a written report re-parses to identical
/// fields.
class Report {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }
    void set(const std::string& key, bool value) { set(key, std::string(value ? "pass" : "fail")); }

    const std::string* find(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string to_text() const;
    static Report parse(const std::string& text);

    void write_file(const std::string& path) const;
    static Report read_file(const std::string& path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double value);

} // namespace chaosdual
