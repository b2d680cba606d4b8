#include "aniso/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "aniso/errors.hpp"

namespace aniso {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 32) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::pair<NormRecord, SupportRecord> measure(const ScalarField& field, double epsilon) {
    if (!(epsilon >= 0.0))
        throw contract_error("support threshold must be nonnegative");
    const Grid& g = field.grid;
    const std::size_t n = field.values.size();

    // Single pass builds |u| and u^2 buffers for the pairwise sums; mass
    // reuses the raw values directly.
    std::vector<double> abs_buf(n), sq_buf(n);
    double linf = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = field.values[k];
        const double a = std::abs(v);
        abs_buf[k] = a;
        sq_buf[k] = v * v;
        linf = std::max(linf, a);
    }
    const double vol = g.cell_volume();
    NormRecord norms;
    norms.mass = pairwise_sum(field.values) * vol;
    norms.l1 = pairwise_sum(abs_buf) * vol;
    norms.l2 = std::sqrt(pairwise_sum(sq_buf) * vol);
    norms.linf = linf;

    SupportRecord support;
    support.radii.assign(static_cast<std::size_t>(g.N), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(g.N), 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (abs_buf[k] > epsilon) {
            for (int i = 0; i < g.N; ++i) {
                const double xi = std::abs(g.center(i, idx[static_cast<std::size_t>(i)]));
                support.radii[static_cast<std::size_t>(i)] =
                    std::max(support.radii[static_cast<std::size_t>(i)], xi);
            }
        }
        for (int i = g.N - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < g.cells[static_cast<std::size_t>(i)])
                break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return {norms, support};
}

RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                      double window_lo, double window_hi, double shift) {
    if (t.size() != y.size())
        throw contract_error("time and value series must have equal length");
    if (!(window_lo > 0.0) || !(window_hi > window_lo))
        throw contract_error("fit window must satisfy 0 < lo < hi");

    std::vector<double> lt, ly;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < window_lo || t[k] > window_hi)
            continue;
        const double v = y[k] - shift;
        if (!(v > 0.0))
            throw contract_error("shifted values must be positive inside the fit window");
        lt.push_back(std::log(t[k]));
        ly.push_back(std::log(v));
    }
    if (lt.size() < 8)
        throw contract_error("fit window holds fewer than 8 points");

    const double n = static_cast<double>(lt.size());
    const double mx = pairwise_sum(lt) / n;
    const double my = pairwise_sum(ly) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < lt.size(); ++k) {
        const double dx = lt[k] - mx;
        const double dy = ly[k] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0))
        throw contract_error("fit window is degenerate in time");

    RateFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    const double ss_res = std::max(0.0, syy - sxy * sxy / sxx);
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.points = static_cast<int>(lt.size());
    return fit;
}

namespace {

bool nonincreasing_within(const std::vector<double>& v, double rel_slack) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] > v[k - 1] * (1.0 + rel_slack))
            return false;
    return true;
}

} // namespace

TheoryComparison compare_to_theory(const NormSeries& norms, const SupportSeries& support,
                                   const AnisotropyProfile& profile, double m1,
                                   std::vector<double> R0, double window_lo,
                                   double window_hi, double shift_scale) {
    (void)m1; // context only; acceptance is exponent-level
    if (R0.size() == 1)
        R0.assign(static_cast<std::size_t>(profile.N), R0[0]);
    if (static_cast<int>(R0.size()) != profile.N)
        throw contract_error("R0 must have one entry per axis");
    if (!(shift_scale >= 0))
        throw contract_error("shift_scale must be nonnegative");
    TheoryComparison cmp;
    cmp.window_lo = window_lo;
    cmp.window_hi = window_hi;

    const DerivedExponents d = derive(profile);
    for (int j = 0; j < profile.N; ++j) {
        if (!(profile.p[static_cast<std::size_t>(j)] > 2.0)) {
            cmp.skipped_axes.push_back(j + 1);
            cmp.mixed_regime = true;
            continue;
        }
        const SupportExponents pred = support_radius_exponents(profile, j);
        const RateFit fit = fit_power_law(support.times, support.radii[static_cast<std::size_t>(j)],
                                          window_lo, window_hi,
                                          shift_scale * R0[static_cast<std::size_t>(j)]);
        AxisComparison axis;
        axis.axis = j + 1;
        axis.fitted = fit.exponent;
        axis.predicted = pred.t_exponent;
        axis.rel_error = (fit.exponent - pred.t_exponent) / std::abs(pred.t_exponent);
        axis.r_squared = fit.r_squared;
        cmp.support.push_back(axis);
    }

    const RateFit linf_fit = fit_power_law(norms.times, norms.linf, window_lo, window_hi, 0.0);
    cmp.linf.axis = 0;
    cmp.linf.fitted = linf_fit.exponent;
    cmp.linf.predicted = -d.N / d.lambda;
    cmp.linf.rel_error = (linf_fit.exponent - cmp.linf.predicted) / std::abs(cmp.linf.predicted);
    cmp.linf.r_squared = linf_fit.r_squared;

    cmp.l1_nonincreasing = nonincreasing_within(norms.l1, 1e-8);
    cmp.l2_nonincreasing = nonincreasing_within(norms.l2, 1e-8);

    double max_dev = 0.0;
    if (!norms.mass.empty()) {
        const double m0 = norms.mass.front();
        const double scale = std::max(std::abs(m0), 1e-300);
        for (double m : norms.mass)
            max_dev = std::max(max_dev, std::abs(m - m0) / scale);
    }
    cmp.mass_max_rel_dev = max_dev;
    return cmp;
}

std::optional<double> annulus_silence(const std::vector<ScalarField>& snapshots,
                                      const std::vector<int>& slow_axes_0based,
                                      double r, double R0, double epsilon) {
    if (snapshots.empty())
        return std::nullopt;
    if (slow_axes_0based.empty())
        throw contract_error("annulus check needs at least one slow axis");
    if (!(r >= 2.0 * R0))
        throw contract_error("annulus radius must be at least 2*R0");
    const Grid& g = snapshots.front().grid;
    for (int j : slow_axes_0based) {
        if (j < 0 || j >= g.N)
            throw geometry_error("slow axis out of range");
        if (r > g.half_widths[static_cast<std::size_t>(j)])
            throw geometry_error("annulus radius exceeds the box");
    }

    for (const ScalarField& snap : snapshots) {
        std::vector<int> idx(static_cast<std::size_t>(g.N), 0);
        for (std::int64_t k = 0; k < g.total; ++k) {
            if (std::abs(snap.values[static_cast<std::size_t>(k)]) > epsilon) {
                double slow_max = 0.0;
                for (int j : slow_axes_0based)
                    slow_max = std::max(slow_max,
                                        std::abs(g.center(j, idx[static_cast<std::size_t>(j)])));
                if (slow_max >= r && slow_max <= 2.0 * r)
                    return snap.time;
            }
            for (int i = g.N - 1; i >= 0; --i) {
                if (++idx[static_cast<std::size_t>(i)] < g.cells[static_cast<std::size_t>(i)])
                    break;
                idx[static_cast<std::size_t>(i)] = 0;
            }
        }
    }
    return std::nullopt;
}

} // namespace aniso
