#pragma once

#include <map>
#include <string>
#include <vector>

#include "aniso/solver.hpp"

namespace aniso {

/// Flat sectioned key-value file:
///   [section]
///   key = value   # comment
/// Later duplicates override earlier ones. Unknown sections/keys are
/// rejected at the typed layer, not here.
struct RawConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
};

RawConfig parse_config_text(const std::string& text);
RawConfig parse_config_file(const std::string& path);

/// Output controls shared by the CLI subcommands.
struct OutputParams {
    std::string dir = "out";
    bool timestamp = true;
    bool svg = false;
    double fit_lo_frac = 0.1; ///< fit window [fit_lo_frac, fit_hi_frac] * horizon
    double fit_hi_frac = 1.0;
    /// Support fits subtract fit_shift_scale * R0_j. The growth law's natural
    /// shift is 2R0; 0 fits the raw radii, which is more robust when R0 spans
    /// a visible fraction of the box.
    double fit_shift_scale = 2.0;
};

struct SimulationConfig {
    RunSetup setup;
    OutputParams output;
};

/// Assembles a full simulation setup from sections [grid], [flux],
/// [initial], [run], [output]. Throws config_error naming the offending
/// key on any problem.
SimulationConfig load_simulation_config(const std::string& path);
SimulationConfig simulation_config_from_raw(const RawConfig& raw);

/// Helpers shared with the CLI: parse "a,b,c" into numbers.
std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

} // namespace aniso
