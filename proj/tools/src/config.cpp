#include "config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "axifb/errors.hpp"

namespace axifb::cli {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
    Config c;
    c.origin_ = origin;
    std::istringstream is(text);
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(n) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(origin + ":" + std::to_string(n) + ": empty key");
        if (c.values_.count(key)) throw ParseError(origin + ":" + std::to_string(n) + ": duplicate key '" + key + "'");
        c.values_[key] = {value, n};
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
}

void Config::fail(const std::string& key, const std::string& what) const {
    auto it = values_.find(key);
    std::string where = origin_;
    if (it != values_.end() && it->second.line > 0) where += ":" + std::to_string(it->second.line);
    throw ParseError(where + ": field '" + key + "': " + what);
}

std::string Config::str(const std::string& key, const std::string& def) const {
    auto it = values_.find(key);
    return it == values_.end() ? def : it->second.value;
}

std::string Config::str(const std::string& key) const {
    if (!has(key)) fail(key, "missing");
    return values_.at(key).value;
}

double Config::num(const std::string& key, double def) const { return has(key) ? num(key) : def; }

double Config::num(const std::string& key) const {
    std::string v = str(key);
    char* end = nullptr;
    errno = 0;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE) fail(key, "not a number: '" + v + "'");
    return x;
}

int Config::integer(const std::string& key, int def) const {
    if (!has(key)) return def;
    std::string v = str(key);
    char* end = nullptr;
    long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') fail(key, "not an integer: '" + v + "'");
    return int(x);
}

bool Config::flag(const std::string& key, bool def) const {
    if (!has(key)) return def;
    std::string v = str(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(key, "not a boolean: '" + v + "'");
}

void Config::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, e] : values_)
        if (!allowed.count(key)) fail(key, "unknown key");
}

}  // namespace axifb::cli
