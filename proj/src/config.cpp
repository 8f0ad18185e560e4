#include "hs/config.hpp"

#include "hs/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hs {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::string& origin)
{
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        const std::string where = origin + ":" + std::to_string(number);
        if (eq == std::string::npos) throw FormatError(where + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        if (key.empty()) throw FormatError(where + ": empty key");
        if (cfg.has(key)) throw FormatError(where + ": repeated key '" + key + "'");
        cfg.set(key, value);
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str(), path.string());
}

std::optional<std::string> RunConfig::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

double parse_real(const std::string& text)
{
    const std::string s = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw DomainError("not a decimal number: '" + text + "'");
    return v;
}

int parse_integer(const std::string& text)
{
    const double v = parse_real(text);
    if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max())
        throw DomainError("not an integer: '" + text + "'");
    return int(v);
}

}  // namespace hs
