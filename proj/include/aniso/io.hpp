#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aniso/config.hpp"
#include "aniso/diagnostics.hpp"
#include "aniso/solver.hpp"

namespace aniso {

/// Shortest round-trippable decimal form of a double.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);

/// Header: t,mass,l1,l2,linf,R_1,...,R_N. One row per record.
void write_series_csv(const std::string& path, const NormSeries& norms,
                      const SupportSeries& support);

/// 1-D: x,u rows. 2-D: x1,x2,u rows (row-major). Higher dimensions use
/// write_snapshot_binary instead.
void write_snapshot_csv(const std::string& path, const ScalarField& field);

/// Raw little-endian doubles at <base>.bin plus a text sidecar <base>.meta
/// describing cells, half-widths and time.
void write_snapshot_binary(const std::string& base, const ScalarField& field);

struct PlotCurve {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Reference-anchored straight line in log-log coordinates.
struct GuideLine {
    std::string label;
    double slope = 0;
    double x_ref = 1;
    double y_ref = 1;
};

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotCurve>& curves,
                      const std::vector<GuideLine>& guides);

std::string format_run_report(const SimulationConfig& cfg, const Trajectory& traj,
                              const std::optional<TheoryComparison>& cmp,
                              bool with_timestamp);

struct RunArtifacts {
    std::string series_path;
    std::string report_path;
    std::vector<std::string> snapshot_paths;
    std::vector<std::string> svg_paths;
};

/// Writes series CSV, snapshots, report and (optionally) SVG plots under
/// cfg.output.dir, creating the directory if needed.
RunArtifacts write_run_outputs(const SimulationConfig& cfg, const Trajectory& traj,
                               bool with_timestamp);

} // namespace aniso
