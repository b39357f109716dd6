#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "errors.hpp"
#include "evolution.hpp"

namespace bgk {

struct RunConfig {
    double grid_l = 8.0;
    int grid_n = 4096;
    std::vector<double> xi_list;  // empty: the command picks its default
    std::vector<double> times;    // empty: the command picks its default
    double dt = 0.01;
    Method method = Method::both;
    double xi0 = 1.0;  // reference cutoff for truncated decay sweeps
    std::string out_dir = "out";
    std::string format = "csv";
    std::uint64_t seed = 12345;
    bool experimental_resonance = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double to_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (...) {
        throw config_error("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw config_error("trailing junk in number: '" + s + "'");
    return v;
}

inline long long to_int(const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (...) {
        throw config_error("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw config_error("trailing junk in integer: '" + s + "'");
    return v;
}

inline bool to_bool(const std::string& s) {
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw config_error("not a boolean: '" + s + "'");
}

}  // namespace detail

// Comma-separated values; a token a:b:step expands to the inclusive range.
inline std::vector<double> parse_double_list(const std::string& spec) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = spec.find(',', start);
        const std::string tok =
            detail::trim(spec.substr(start, comma == std::string::npos
                                                ? std::string::npos
                                                : comma - start));
        if (!tok.empty()) {
            const std::size_t c1 = tok.find(':');
            if (c1 == std::string::npos) {
                out.push_back(detail::to_double(tok));
            } else {
                const std::size_t c2 = tok.find(':', c1 + 1);
                if (c2 == std::string::npos)
                    throw config_error("range needs start:stop:step, got '" + tok + "'");
                const double a = detail::to_double(tok.substr(0, c1));
                const double b = detail::to_double(tok.substr(c1 + 1, c2 - c1 - 1));
                const double h = detail::to_double(tok.substr(c2 + 1));
                if (h <= 0.0 || b < a)
                    throw config_error("empty or descending range '" + tok + "'");
                if ((b - a) / h > 100000.0)
                    throw config_error("range too long: '" + tok + "'");
                for (int k = 0;; ++k) {
                    const double x = a + k * h;
                    if (x > b + 1e-9 * std::max(1.0, std::abs(b))) break;
                    out.push_back(x);
                }
            }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

inline Method parse_method(const std::string& s) {
    if (s == "spectral") return Method::spectral;
    if (s == "direct") return Method::direct;
    if (s == "both") return Method::both;
    throw config_error("method must be spectral, direct, or both, got '" + s + "'");
}

inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "grid_l") {
        cfg.grid_l = detail::to_double(value);
        if (!(cfg.grid_l > 0.0)) throw config_error("grid_l must be positive");
    } else if (key == "grid_n") {
        const long long n = detail::to_int(value);
        if (n < 8 || n % 2 != 0 || n > 1 << 22)
            throw config_error("grid_n must be even, >= 8, and sane");
        cfg.grid_n = static_cast<int>(n);
    } else if (key == "xi") {
        cfg.xi_list = parse_double_list(value);
    } else if (key == "times") {
        cfg.times = parse_double_list(value);
    } else if (key == "dt") {
        cfg.dt = detail::to_double(value);
        if (!(cfg.dt > 0.0)) throw config_error("dt must be positive");
    } else if (key == "method") {
        cfg.method = parse_method(value);
    } else if (key == "xi0") {
        cfg.xi0 = detail::to_double(value);
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "format") {
        if (value != "csv" && value != "json")
            throw config_error("format must be csv or json, got '" + value + "'");
        cfg.format = value;
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(detail::to_int(value));
    } else if (key == "experimental_resonance") {
        cfg.experimental_resonance = detail::to_bool(value);
    } else {
        throw config_error("unknown config key: '" + key + "'");
    }
}

// key = value lines, '#' starts a comment, unknown keys are rejected.
inline RunConfig load_config_file(const std::string& path, RunConfig cfg = {}) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
        apply_key(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    return cfg;
}

}  // namespace bgk
