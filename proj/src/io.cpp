#include "aniso/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt6(double v) { return fmt("%.6g", v); }

const char* shape_name(InitialShape s) {
    switch (s) {
    case InitialShape::box_bump: return "box-bump";
    case InitialShape::product_bump: return "product-bump";
    case InitialShape::two_bump: return "two-bump";
    }
    return "?";
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string radius_fit_label(int axis, double shift_scale) {
    std::string label = "R_" + std::to_string(axis);
    if (shift_scale == 2.0) {
        label += " - 2R0";
    } else if (shift_scale != 0.0) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " - %gR0", shift_scale);
        label += buf;
    }
    return label;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw config_error("write to '" + path + "' failed");
}

void write_series_csv(const std::string& path, const NormSeries& norms,
                      const SupportSeries& support) {
    const size_t rows = norms.times.size();
    if (support.times.size() != rows)
        throw contract_error("norm and support series have different lengths");
    std::ostringstream out;
    out << "t,mass,l1,l2,linf";
    for (size_t j = 0; j < support.radii.size(); ++j) out << ",R_" << (j + 1);
    out << "\n";
    for (size_t k = 0; k < rows; ++k) {
        out << format_double(norms.times[k]) << ',' << format_double(norms.mass[k]) << ','
            << format_double(norms.l1[k]) << ',' << format_double(norms.l2[k]) << ','
            << format_double(norms.linf[k]);
        for (const auto& axis : support.radii) out << ',' << format_double(axis[k]);
        out << "\n";
    }
    write_text_file(path, out.str());
}

void write_snapshot_csv(const std::string& path, const ScalarField& field) {
    const Grid& g = field.grid;
    if (g.N > 2)
        throw contract_error("CSV snapshots support 1 or 2 dimensions; use the binary writer");
    std::ostringstream out;
    if (g.N == 1) {
        out << "x,u\n";
        for (int k = 0; k < g.cells[0]; ++k)
            out << format_double(g.center(0, k)) << ','
                << format_double(field.values[static_cast<size_t>(k)]) << "\n";
    } else {
        out << "x1,x2,u\n";
        size_t idx = 0;
        for (int i = 0; i < g.cells[0]; ++i)
            for (int j = 0; j < g.cells[1]; ++j, ++idx)
                out << format_double(g.center(0, i)) << ',' << format_double(g.center(1, j))
                    << ',' << format_double(field.values[idx]) << "\n";
    }
    write_text_file(path, out.str());
}

void write_snapshot_binary(const std::string& base, const ScalarField& field) {
    const std::string bin = base + ".bin";
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw config_error("cannot open '" + bin + "' for writing");
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw config_error("write to '" + bin + "' failed");

    std::ostringstream meta;
    meta << "layout = row-major, last axis contiguous, little-endian float64\n";
    meta << "cells = ";
    for (size_t i = 0; i < field.grid.cells.size(); ++i)
        meta << (i ? "," : "") << field.grid.cells[i];
    meta << "\nhalf_widths = " << join_doubles(field.grid.half_widths);
    meta << "\ntime = " << format_double(field.time) << "\n";
    write_text_file(base + ".meta", meta.str());
}

namespace {

struct LogPoint {
    double lx, ly;
};

std::vector<LogPoint> log_points(const PlotCurve& c) {
    std::vector<LogPoint> pts;
    for (size_t i = 0; i < c.x.size() && i < c.y.size(); ++i)
        if (c.x[i] > 0 && c.y[i] > 0 && std::isfinite(c.x[i]) && std::isfinite(c.y[i]))
            pts.push_back({std::log10(c.x[i]), std::log10(c.y[i])});
    return pts;
}

} // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotCurve>& curves,
                      const std::vector<GuideLine>& guides) {
    constexpr double W = 720, H = 520, ML = 70, MR = 20, MT = 44, MB = 52;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::vector<std::vector<LogPoint>> data;
    double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    for (const auto& c : curves) {
        data.push_back(log_points(c));
        for (const auto& p : data.back()) {
            lx0 = std::min(lx0, p.lx);
            lx1 = std::max(lx1, p.lx);
            ly0 = std::min(ly0, p.ly);
            ly1 = std::max(ly1, p.ly);
        }
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";

    if (lx0 > lx1) {
        out << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
            << "\" text-anchor=\"middle\" font-size=\"14\">no positive data</text>\n</svg>\n";
        write_text_file(path, out.str());
        return;
    }
    if (lx1 - lx0 < 1e-12) { lx0 -= 0.5; lx1 += 0.5; }
    if (ly1 - ly0 < 1e-12) { ly0 -= 0.5; ly1 += 0.5; }
    const double padx = 0.04 * (lx1 - lx0), pady = 0.06 * (ly1 - ly0);
    lx0 -= padx; lx1 += padx; ly0 -= pady; ly1 += pady;

    auto X = [&](double lx) { return ML + (lx - lx0) / (lx1 - lx0) * (W - ML - MR); };
    auto Y = [&](double ly) { return H - MB - (ly - ly0) / (ly1 - ly0) * (H - MT - MB); };

    out << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR
        << "\" height=\"" << H - MT - MB << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
        const double x = X(d);
        out << "<line x1=\"" << x << "\" y1=\"" << H - MB << "\" x2=\"" << x << "\" y2=\""
            << H - MB + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << H - MB + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
        const double y = Y(d);
        out << "<line x1=\"" << ML - 5 << "\" y1=\"" << y << "\" x2=\"" << ML << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << ML - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
    }
    out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 10
        << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (MT + H - MB) / 2 << ")\">" << y_label << "</text>\n";

    for (const auto& g : guides) {
        if (!(g.x_ref > 0 && g.y_ref > 0)) continue;
        const double lyl = std::log10(g.y_ref) + g.slope * (lx0 + padx - std::log10(g.x_ref));
        const double lyr = std::log10(g.y_ref) + g.slope * (lx1 - padx - std::log10(g.x_ref));
        out << "<line x1=\"" << X(lx0 + padx) << "\" y1=\"" << Y(lyl) << "\" x2=\""
            << X(lx1 - padx) << "\" y2=\"" << Y(lyr)
            << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n"
            << "<text x=\"" << X(lx1 - padx) - 4 << "\" y=\"" << Y(lyr) - 6
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#555\">" << g.label
            << "</text>\n";
    }

    for (size_t c = 0; c < data.size(); ++c) {
        if (data[c].empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << palette[c % 5]
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : data[c]) out << fmt("%.2f", X(p.lx)) << ',' << fmt("%.2f", Y(p.ly)) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << ML + 10 << "\" y=\"" << MT + 18 + 16 * static_cast<double>(c)
            << "\" font-size=\"12\" fill=\"" << palette[c % 5] << "\">" << curves[c].label
            << "</text>\n";
    }
    out << "</svg>\n";
    write_text_file(path, out.str());
}

std::string format_run_report(const SimulationConfig& cfg, const Trajectory& traj,
                              const std::optional<TheoryComparison>& cmp,
                              bool with_timestamp) {
    const RunSetup& s = cfg.setup;
    std::ostringstream out;
    out << "orthotropic diffusion run report\n";
    if (with_timestamp) out << "generated: " << utc_now() << "\n";
    out << "\n";

    out << "grid      cells =";
    for (int c : s.grid.cells) out << ' ' << c;
    out << "   half_widths =";
    for (double L : s.grid.half_widths) out << ' ' << fmt6(L);
    out << "\n";
    out << "flux      kind = " << (s.flux.kind == FluxKind::orthotropic ? "orthotropic" : "perturbed")
        << "   p =";
    for (double p : s.flux.p) out << ' ' << fmt6(p);
    out << "   lambda = " << fmt6(s.flux.Lambda);
    if (s.flux.kind == FluxKind::perturbed) out << "   seed = " << s.flux.seed;
    out << "\n";
    out << "initial   shape = " << shape_name(s.shape) << "   radius =";
    for (double r : s.R0) out << ' ' << fmt6(r);
    out << "   amplitude = " << fmt6(s.amplitude);
    if (s.shape == InitialShape::two_bump) out << "   separation = " << fmt6(s.separation);
    out << "\n";
    out << "run       horizon = " << fmt6(s.run.horizon) << "   safety = " << fmt6(s.run.safety)
        << "   steps = " << traj.steps << "   records = " << traj.norms.times.size() << "\n";
    if (traj.steps > 0)
        out << "          dt in [" << fmt6(traj.min_dt) << ", " << fmt6(traj.max_dt) << "]\n";
    out << "          support threshold = " << fmt6(traj.epsilon_used);
    if (s.run.epsilon_rel > 0.0 && traj.epsilon_used > s.run.epsilon)
        out << " at t = 0 (" << fmt6(s.run.epsilon_rel) << " of the running max)";
    out << "\n\n";

    const auto& n = traj.norms;
    if (!n.times.empty()) {
        out << "mass      initial = " << fmt6(n.mass.front()) << "   final = "
            << fmt6(n.mass.back()) << "\n";
        out << "linf      initial = " << fmt6(n.linf.front()) << "   final = "
            << fmt6(n.linf.back()) << "\n";
        if (n.linf.front() == 0.0)
            out << "note: trivial run (identically zero datum)\n";
    }

    if (cmp) {
        out << "mass      max relative deviation = " << fmt6(cmp->mass_max_rel_dev) << "\n";
        out << "l1        nonincreasing = " << (cmp->l1_nonincreasing ? "yes" : "NO") << "\n";
        out << "l2        nonincreasing = " << (cmp->l2_nonincreasing ? "yes" : "NO") << "\n\n";
        out << "power-law fits over t in [" << fmt6(cmp->window_lo) << ", "
            << fmt6(cmp->window_hi) << "]\n";
        out << "  quantity      fitted      predicted   rel_error   r^2\n";
        for (const auto& a : cmp->support) {
            char line[160];
            std::snprintf(line, sizeof(line),
                          "  %-12s  %+.4f     %+.4f     %+.2f%%      %.6f\n",
                          radius_fit_label(a.axis, cfg.output.fit_shift_scale).c_str(),
                          a.fitted, a.predicted, 100.0 * a.rel_error, a.r_squared);
            out << line;
        }
        {
            char line[160];
            std::snprintf(line, sizeof(line),
                          "  %-12s  %+.4f     %+.4f     %+.2f%%      %.6f\n", "linf",
                          cmp->linf.fitted, cmp->linf.predicted, 100.0 * cmp->linf.rel_error,
                          cmp->linf.r_squared);
            out << line;
        }
        if (!cmp->skipped_axes.empty()) {
            out << "  axes without a spreading law (p_j <= 2):";
            for (int a : cmp->skipped_axes) out << ' ' << a;
            out << "\n";
        }
        if (cmp->mixed_regime)
            out << "  note: mixed regime; fast axes diffuse without compact spreading\n";
    } else {
        out << "power-law fits: not available for this run\n";
    }
    return out.str();
}

RunArtifacts write_run_outputs(const SimulationConfig& cfg, const Trajectory& traj,
                               bool with_timestamp) {
    namespace fs = std::filesystem;
    RunArtifacts art;
    fs::create_directories(cfg.output.dir);
    const std::string dir = cfg.output.dir + "/";

    art.series_path = dir + "series.csv";
    write_series_csv(art.series_path, traj.norms, traj.support);

    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
        char tag[32];
        std::snprintf(tag, sizeof(tag), "snapshot_%04zu", k);
        if (cfg.setup.grid.N <= 2) {
            const std::string path = dir + tag + ".csv";
            write_snapshot_csv(path, traj.snapshots[k]);
            art.snapshot_paths.push_back(path);
        } else {
            write_snapshot_binary(dir + tag, traj.snapshots[k]);
            art.snapshot_paths.push_back(dir + tag + ".bin");
        }
    }

    std::optional<TheoryComparison> cmp;
    const double T = cfg.setup.run.horizon;
    if (T > 0 && !traj.norms.times.empty()) {
        try {
            AnisotropyProfile prof = make_profile(cfg.setup.flux.p, cfg.setup.flux.Lambda);
            cmp = compare_to_theory(traj.norms, traj.support, prof, traj.norms.mass.front(),
                                    cfg.setup.R0, cfg.output.fit_lo_frac * T,
                                    cfg.output.fit_hi_frac * T, cfg.output.fit_shift_scale);
        } catch (const error&) {
            cmp.reset(); // degenerate series (e.g. zero datum): report without fits
        }
    }

    art.report_path = dir + "report.txt";
    write_text_file(art.report_path, format_run_report(cfg, traj, cmp, with_timestamp));

    if (cfg.output.svg) {
        std::vector<PlotCurve> radii;
        std::vector<GuideLine> guides;
        for (size_t j = 0; j < traj.support.radii.size(); ++j) {
            const double shift = cfg.output.fit_shift_scale *
                                 cfg.setup.R0[cfg.setup.R0.size() == 1 ? 0 : j];
            PlotCurve c;
            c.label = radius_fit_label(static_cast<int>(j + 1), cfg.output.fit_shift_scale);
            c.x = traj.support.times;
            for (double r : traj.support.radii[j]) c.y.push_back(r - shift);
            radii.push_back(std::move(c));
        }
        if (cmp) {
            for (const auto& a : cmp->support) {
                const auto& c = radii[static_cast<size_t>(a.axis - 1)];
                double xr = 0, yr = 0;
                for (size_t i = c.x.size(); i-- > 0;)
                    if (c.x[i] > 0 && c.y[i] > 0) { xr = c.x[i]; yr = c.y[i]; break; }
                if (xr > 0)
                    guides.push_back({"slope " + fmt6(a.predicted), a.predicted, xr, yr});
            }
        }
        const std::string sup_path = dir + "support.svg";
        write_loglog_svg(sup_path, "support radius growth", "t",
                         cfg.output.fit_shift_scale == 0.0 ? "R_j(t)" : "R_j(t) - shift",
                         radii, guides);
        art.svg_paths.push_back(sup_path);

        PlotCurve linf{"max |u|", traj.norms.times, traj.norms.linf};
        std::vector<GuideLine> dguides;
        if (cmp && !linf.x.empty()) {
            double xr = 0, yr = 0;
            for (size_t i = linf.x.size(); i-- > 0;)
                if (linf.x[i] > 0 && linf.y[i] > 0) { xr = linf.x[i]; yr = linf.y[i]; break; }
            if (xr > 0)
                dguides.push_back({"slope " + fmt6(cmp->linf.predicted), cmp->linf.predicted, xr, yr});
        }
        const std::string dec_path = dir + "decay.svg";
        write_loglog_svg(dec_path, "amplitude decay", "t", "max |u|", {linf}, dguides);
        art.svg_paths.push_back(dec_path);
    }
    return art;
}

} // namespace aniso
