#pragma once

#include <map>
#include <set>
#include <string>

namespace axifb::cli {

// Flat "key = value" text with # comments.
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "config");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string str(const std::string& key, const std::string& def) const;
    std::string str(const std::string& key) const;
    double num(const std::string& key, double def) const;
    double num(const std::string& key) const;
    int integer(const std::string& key, int def) const;
    bool flag(const std::string& key, bool def) const;
    void set(const std::string& key, const std::string& value) { values_[key] = {value, 0}; }
    // Throws ParseError naming the first key outside the allowed set.
    void require_known(const std::set<std::string>& allowed) const;

private:
    struct Entry {
        std::string value;
        int line;
    };
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
    std::map<std::string, Entry> values_;
    std::string origin_;
};

}  // namespace axifb::cli
