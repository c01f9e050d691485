// config.hpp — One `key = value` per line run configurations, with fail-fast
// typed access and per-experiment validation.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "weakdwell/errors.hpp"

namespace weakdwell {

enum class Experiment { bath_sim, pointer_sim, survival, dwell, sweep };
enum class OutputFormat { csv, json };

inline std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::bath_sim: return "bath-sim";
        case Experiment::pointer_sim: return "pointer-sim";
        case Experiment::survival: return "survival";
        case Experiment::dwell: return "dwell";
        case Experiment::sweep: return "sweep";
    }
    return "?";
}

inline Experiment experiment_from_name(const std::string& name) {
    if (name == "bath-sim") return Experiment::bath_sim;
    if (name == "pointer-sim") return Experiment::pointer_sim;
    if (name == "survival") return Experiment::survival;
    if (name == "dwell") return Experiment::dwell;
    if (name == "sweep") return Experiment::sweep;
    throw ConfigError("unknown experiment: " + name);
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace detail

class ParamSet {
  public:
    ParamSet() = default;

    // Parses `key = value` lines; '#' starts a comment, blank lines are
    // skipped, duplicate keys are rejected.
    static ParamSet parse_string(const std::string& text) {
        ParamSet params;
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": expected `key = value`");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
            if (params.values_.count(key))
                throw ConfigError("duplicate config key: " + key);
            params.values_[key] = value;
        }
        return params;
    }

    static ParamSet parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing config key: " + key);
        return it->second;
    }

    std::string get_string_or(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }

    double get_double_or(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    long get_int(const std::string& key) const {
        const std::string raw = get_string(key);
        char* end = nullptr;
        const long v = std::strtol(raw.c_str(), &end, 10);
        if (end == raw.c_str() || *end != '\0')
            throw ConfigError("config key " + key + ": not an integer: " + raw);
        return v;
    }

    long get_int_or(const std::string& key, long fallback) const {
        return has(key) ? get_int(key) : fallback;
    }

    bool get_bool_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string raw = get_string(key);
        if (raw == "1" || raw == "true") return true;
        if (raw == "0" || raw == "false") return false;
        throw ConfigError("config key " + key + ": expected a boolean (0/1/true/false)");
    }

    // Rejects anything outside the allowed key set, naming the stray key.
    void require_known_keys(const std::set<std::string>& allowed) const {
        for (const auto& [key, value] : values_)
            if (!allowed.count(key)) throw ConfigError("unknown config key: " + key);
    }

    const std::map<std::string, std::string>& entries() const { return values_; }

  private:
    static double to_double(const std::string& key, const std::string& raw) {
        char* end = nullptr;
        const double v = std::strtod(raw.c_str(), &end);
        if (end == raw.c_str() || *end != '\0')
            throw ConfigError("config key " + key + ": not a number: " + raw);
        return v;
    }

    std::map<std::string, std::string> values_;
};

struct RunConfig {
    Experiment experiment{Experiment::dwell};
    ParamSet params;
    std::string output_path;          // may come from config `output_path` or --out
    OutputFormat format{OutputFormat::csv};
};

struct SweepSpec {
    std::string variable;
    double start{}, stop{};
    long steps{};
    bool log_scale{};
};

inline OutputFormat format_from_name(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("config key format: expected csv or json, got " + name);
}

// The two bookkeeping keys every experiment accepts in its config file.
inline std::set<std::string> common_keys() { return {"output_path", "format"}; }

}  // namespace weakdwell
