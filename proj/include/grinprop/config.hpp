#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "errors.hpp"
#include "source.hpp"
#include "waveguide.hpp"

namespace grinprop {

struct ScanConfig {
    double z_min = 0.0;
    double z_max = 6732.0;
    int n_z = 2000;
    std::string regime = "exact";  // exact | paraxial | both
    int threads = 0;               // 0 = auto; result bytes are thread-count independent

    void validate() const {
        if (!std::isfinite(z_min) || !std::isfinite(z_max)) throw ConfigError("scan.z_min/z_max must be finite");
        if (z_min > z_max) throw ConfigError("scan.z_min must be <= scan.z_max");
        if (n_z < 1) throw ConfigError("scan.n_z must be >= 1");
        if (threads < 0) throw ConfigError("scan.threads must be >= 0");
        if (regime != "exact" && regime != "paraxial" && regime != "both")
            throw ConfigError("scan.regime must be exact, paraxial or both");
    }
};

struct OutputConfig {
    std::string directory = "out";
    std::string prefix = "run";
};

struct RunConfig {
    SourceSpec source;
    WaveguideSpec waveguide;
    Numerics numerics;
    ScanConfig scan;
    OutputConfig outputs;

    void validate() const {
        source.validate();
        waveguide.validate();
        numerics.validate();
        scan.validate();
        if (outputs.directory.empty()) throw ConfigError("outputs.directory must not be empty");
        if (outputs.prefix.empty()) throw ConfigError("outputs.prefix must not be empty");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "+inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number for " + key + ": '" + v + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse integer for " + key + ": '" + v + "'");
    }
}

inline std::string format_value(double d) {
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

} // namespace detail

// Keys are block.field; used both by the INI loader and --set overrides.
inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    if (key == "source.a0") cfg.source.a0 = parse_double(key, value);
    else if (key == "source.r0") cfg.source.r0 = parse_double(key, value);
    else if (key == "source.x0") cfg.source.x0 = parse_double(key, value);
    else if (key == "source.I0") cfg.source.I0 = parse_double(key, value);
    else if (key == "waveguide.n0") cfg.waveguide.n0 = parse_double(key, value);
    else if (key == "waveguide.omega") cfg.waveguide.omega = parse_double(key, value);
    else if (key == "waveguide.lambda") cfg.waveguide.wavelength = parse_double(key, value);
    else if (key == "numerics.tail_tol") cfg.numerics.tail_tol = parse_double(key, value);
    else if (key == "numerics.comp_tol") cfg.numerics.comp_tol = parse_double(key, value);
    else if (key == "numerics.quad_points") cfg.numerics.quad_points = parse_int(key, value);
    else if (key == "numerics.quad_window") cfg.numerics.quad_window = parse_double(key, value);
    else if (key == "numerics.grid_points") cfg.numerics.grid_points = parse_int(key, value);
    else if (key == "numerics.grid_extent") cfg.numerics.grid_extent = parse_double(key, value);
    else if (key == "numerics.mode_count") cfg.numerics.mode_count = parse_int(key, value);
    else if (key == "scan.z_min") cfg.scan.z_min = parse_double(key, value);
    else if (key == "scan.z_max") cfg.scan.z_max = parse_double(key, value);
    else if (key == "scan.n_z") cfg.scan.n_z = parse_int(key, value);
    else if (key == "scan.regime") cfg.scan.regime = value;
    else if (key == "scan.threads") cfg.scan.threads = parse_int(key, value);
    else if (key == "outputs.directory") cfg.outputs.directory = value;
    else if (key == "outputs.prefix") cfg.outputs.prefix = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

// Flat INI: [block] headers, key = value lines, # or ; comments.
inline RunConfig parse_config(std::istream& is, RunConfig base = {}) {
    std::string line, block;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed block header");
            block = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (block.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside any [block]");
        apply_key(base, block + "." + key, value);
    }
    return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(f, base);
}

inline std::string serialize_config(const RunConfig& c) {
    using detail::format_value;
    std::ostringstream os;
    os << "[source]\n";
    os << "a0 = " << format_value(c.source.a0) << "\n";
    os << "r0 = " << format_value(c.source.r0) << "\n";
    os << "x0 = " << format_value(c.source.x0) << "\n";
    os << "I0 = " << format_value(c.source.I0) << "\n";
    os << "\n[waveguide]\n";
    os << "n0 = " << format_value(c.waveguide.n0) << "\n";
    os << "omega = " << format_value(c.waveguide.omega) << "\n";
    os << "lambda = " << format_value(c.waveguide.wavelength) << "\n";
    os << "\n[numerics]\n";
    os << "tail_tol = " << format_value(c.numerics.tail_tol) << "\n";
    os << "comp_tol = " << format_value(c.numerics.comp_tol) << "\n";
    os << "quad_points = " << c.numerics.quad_points << "\n";
    os << "quad_window = " << format_value(c.numerics.quad_window) << "\n";
    os << "grid_points = " << c.numerics.grid_points << "\n";
    os << "grid_extent = " << format_value(c.numerics.grid_extent) << "\n";
    os << "mode_count = " << c.numerics.mode_count << "\n";
    os << "\n[scan]\n";
    os << "z_min = " << format_value(c.scan.z_min) << "\n";
    os << "z_max = " << format_value(c.scan.z_max) << "\n";
    os << "n_z = " << c.scan.n_z << "\n";
    os << "regime = " << c.scan.regime << "\n";
    os << "threads = " << c.scan.threads << "\n";
    os << "\n[outputs]\n";
    os << "directory = " << c.outputs.directory << "\n";
    os << "prefix = " << c.outputs.prefix << "\n";
    return os.str();
}

// Single-line form for CSV provenance headers. scan.threads is elided: the
// worker count must not influence output bytes.
inline std::string config_provenance(const RunConfig& c) {
    std::string s = serialize_config(c);
    std::string out;
    std::string block;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.front() == '[') {
            block = line.substr(1, line.size() - 2);
            continue;
        }
        size_t eq = line.find(" = ");
        std::string key = block + "." + line.substr(0, eq);
        if (key == "scan.threads") continue;
        if (!out.empty()) out += ' ';
        out += key + "=" + line.substr(eq + 3);
    }
    return out;
}

} // namespace grinprop
