#pragma once

// Flat "key = value" run configuration. Keys are the long flag names without
// the leading dashes; values given on the command line take precedence.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace hs {

class RunConfig {
public:
    /// Lines are "key = value"; blank lines and lines starting with '#' are
    /// skipped. Throws FormatError on malformed lines or repeated keys.
    static RunConfig parse(const std::string& text, const std::string& origin = "<config>");
    static RunConfig load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Decimal literal to double; the whole string must be consumed.
double parse_real(const std::string& text);
/// Decimal literal with an integral value ("150", "1.5e2").
int parse_integer(const std::string& text);

}  // namespace hs
