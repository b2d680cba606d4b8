#include "aniso/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0;
    size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& s) {
    auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw config_error(key + ": expected a number, got '" + text + "'");
    return v;
}

long to_long(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw config_error(key + ": expected an integer, got '" + text + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    throw config_error(key + ": expected a boolean, got '" + text + "'");
}

/// Broadcasts a length-1 list to n entries; rejects other mismatches.
template <class T>
std::vector<T> broadcast(const std::string& key, std::vector<T> v, int n) {
    if (static_cast<int>(v.size()) == n) return v;
    if (v.size() == 1) return std::vector<T>(static_cast<size_t>(n), v[0]);
    throw config_error(key + ": expected 1 or " + std::to_string(n) +
                       " values, got " + std::to_string(v.size()));
}

} // namespace

bool RawConfig::has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
}

std::string RawConfig::get(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end())
        throw config_error("missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end())
        throw config_error("missing key '" + key + "' in section [" + section + "]");
    return k->second;
}

std::string RawConfig::get_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

RawConfig parse_config_text(const std::string& text) {
    RawConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw config_error("line " + std::to_string(lineno) +
                                   ": unterminated section header");
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty())
                throw config_error("line " + std::to_string(lineno) + ": empty section name");
            cfg.sections[section]; // materialize even if empty
            continue;
        }
        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw config_error("line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw config_error("line " + std::to_string(lineno) + ": empty key");
        cfg.sections[section][key] = value;
    }
    return cfg;
}

RawConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) out.push_back(to_double("list entry", item));
    if (out.empty()) throw config_error("expected a comma-separated list of numbers");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        out.push_back(static_cast<int>(to_long("list entry", item)));
    if (out.empty()) throw config_error("expected a comma-separated list of integers");
    return out;
}

SimulationConfig simulation_config_from_raw(const RawConfig& raw) {
    // Reject unknown sections and keys up front: a misspelled key would
    // otherwise silently fall back to its default.
    static const std::map<std::string, std::vector<std::string>> known{
        {"flux", {"p", "lambda", "kind", "seed"}},
        {"grid", {"cells", "half_widths"}},
        {"initial", {"shape", "radius", "amplitude", "separation"}},
        {"run",
         {"horizon", "safety", "fallback_dt", "cadence", "cadence_first_frac",
          "epsilon", "epsilon_rel", "support_floor_rel", "collar_rel",
          "snapshot_every"}},
        {"output",
         {"dir", "timestamp", "svg", "fit_lo_frac", "fit_hi_frac", "fit_shift_scale"}}};
    for (const auto& [section, entries] : raw.sections) {
        const auto it = known.find(section);
        if (it == known.end())
            throw config_error("unknown section [" + section + "]");
        for (const auto& [key, value] : entries)
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                throw config_error("unknown key '" + key + "' in section [" + section + "]");
    }

    SimulationConfig cfg;

    const std::vector<double> p = parse_double_list(raw.get("flux", "p"));
    const int N = static_cast<int>(p.size());
    const double lambda = to_double("flux.lambda", raw.get_or("flux", "lambda", "1"));
    const auto kind = parse_flux_kind(raw.get_or("flux", "kind", "orthotropic"));
    const auto seed =
        static_cast<uint64_t>(to_long("flux.seed", raw.get_or("flux", "seed", "0")));
    cfg.setup.flux = make_flux(kind, p, lambda, seed);

    auto cells = broadcast("grid.cells", parse_int_list(raw.get("grid", "cells")), N);
    auto half = broadcast("grid.half_widths",
                          parse_double_list(raw.get("grid", "half_widths")), N);
    cfg.setup.grid = make_grid(cells, half);

    cfg.setup.shape = parse_initial_shape(raw.get_or("initial", "shape", "box-bump"));
    cfg.setup.R0 =
        broadcast("initial.radius", parse_double_list(raw.get("initial", "radius")), N);
    cfg.setup.amplitude = to_double("initial.amplitude", raw.get("initial", "amplitude"));
    cfg.setup.separation =
        to_double("initial.separation", raw.get_or("initial", "separation", "0"));

    RunParams& run = cfg.setup.run;
    run.horizon = to_double("run.horizon", raw.get("run", "horizon"));
    run.safety = to_double("run.safety", raw.get_or("run", "safety", "0.4"));
    run.fallback_dt =
        to_double("run.fallback_dt", raw.get_or("run", "fallback_dt", "1e-6"));
    run.cadence = static_cast<int>(to_long("run.cadence", raw.get_or("run", "cadence", "481")));
    run.cadence_first_frac = to_double("run.cadence_first_frac",
                                       raw.get_or("run", "cadence_first_frac", "1e-4"));
    run.epsilon = to_double("run.epsilon", raw.get_or("run", "epsilon", "0"));
    run.epsilon_rel = to_double("run.epsilon_rel", raw.get_or("run", "epsilon_rel", "0"));
    run.support_floor_rel = to_double("run.support_floor_rel",
                                      raw.get_or("run", "support_floor_rel", "0"));
    run.collar_rel = to_double("run.collar_rel", raw.get_or("run", "collar_rel", "0"));
    run.snapshot_every = static_cast<int>(
        to_long("run.snapshot_every", raw.get_or("run", "snapshot_every", "0")));
    if (run.horizon < 0) throw config_error("run.horizon: must be nonnegative");
    if (run.cadence < 1) throw config_error("run.cadence: must be at least 1");
    if (run.cadence_first_frac <= 0 || run.cadence_first_frac > 1)
        throw config_error("run.cadence_first_frac: must lie in (0, 1]");
    if (run.epsilon < 0 || run.epsilon_rel < 0)
        throw config_error("run.epsilon/epsilon_rel: must be nonnegative");
    if (run.support_floor_rel < 0 || run.support_floor_rel >= 1)
        throw config_error("run.support_floor_rel: must lie in [0, 1)");
    if (run.collar_rel < 0 || run.collar_rel >= 1)
        throw config_error("run.collar_rel: must lie in [0, 1)");
    if (run.snapshot_every < 0)
        throw config_error("run.snapshot_every: must be nonnegative");

    OutputParams& out = cfg.output;
    out.dir = raw.get_or("output", "dir", "out");
    out.timestamp = to_bool("output.timestamp", raw.get_or("output", "timestamp", "true"));
    out.svg = to_bool("output.svg", raw.get_or("output", "svg", "false"));
    out.fit_lo_frac =
        to_double("output.fit_lo_frac", raw.get_or("output", "fit_lo_frac", "0.1"));
    out.fit_hi_frac =
        to_double("output.fit_hi_frac", raw.get_or("output", "fit_hi_frac", "1.0"));
    if (!(out.fit_lo_frac > 0 && out.fit_lo_frac < out.fit_hi_frac &&
          out.fit_hi_frac <= 1.0))
        throw config_error("output.fit_lo_frac/fit_hi_frac: need 0 < lo < hi <= 1");
    out.fit_shift_scale =
        to_double("output.fit_shift_scale", raw.get_or("output", "fit_shift_scale", "2"));
    if (!(out.fit_shift_scale >= 0))
        throw config_error("output.fit_shift_scale must be nonnegative");

    return cfg;
}

SimulationConfig load_simulation_config(const std::string& path) {
    return simulation_config_from_raw(parse_config_file(path));
}

} // namespace aniso
