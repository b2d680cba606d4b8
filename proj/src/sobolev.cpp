#include "aniso/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aniso/diagnostics.hpp"
#include "aniso/errors.hpp"
#include "aniso/exponents.hpp"

namespace aniso {

SobolevParams make_sobolev_params(std::vector<double> p, std::vector<double> alpha,
                                  double sigma, double theta) {
    SobolevParams sp;
    sp.N = static_cast<int>(p.size());
    if (sp.N < 1 || alpha.size() != p.size())
        throw contract_error("exponents and weights must have matching dimension");
    sp.pbar = harmonic_mean(p);
    if (!(sp.pbar < static_cast<double>(sp.N)))
        throw contract_error("embedding requires pbar < N");
    sp.pbar_star = sobolev_conjugate(sp.pbar, sp.N);
    for (double a : alpha)
        if (!(a > 0.0))
            throw contract_error("weights alpha_i must be positive");
    sp.p = std::move(p);
    sp.alpha = std::move(alpha);
    sp.alpha_tilde = 0.0;
    for (double a : sp.alpha) sp.alpha_tilde += a;
    sp.p_star_alpha = sp.pbar_star * sp.alpha_tilde / sp.N;
    if (!(sigma >= 1.0) || !(sigma <= sp.p_star_alpha))
        throw contract_error("sigma must lie in [1, p_star_alpha]");
    const double theta_max = sp.pbar / sp.pbar_star;
    if (!(theta >= 0.0) || !(theta <= theta_max))
        throw contract_error("theta must lie in [0, pbar/pbar_star]");
    sp.sigma = sigma;
    sp.theta = theta;
    sp.q = theta * sp.p_star_alpha + sigma * (1.0 - theta);
    return sp;
}

NodeGrid make_node_grid(std::vector<int> nodes) {
    if (nodes.empty())
        throw config_error("node grid needs at least one axis");
    NodeGrid g;
    g.N = static_cast<int>(nodes.size());
    g.nodes = std::move(nodes);
    g.total = 1;
    for (int n : g.nodes) {
        if (n < 3)
            throw config_error("each axis needs at least 3 nodes");
        g.total *= n;
        g.spacing.push_back(1.0 / static_cast<double>(n - 1));
    }
    g.strides.assign(static_cast<std::size_t>(g.N), 1);
    for (int i = g.N - 2; i >= 0; --i)
        g.strides[static_cast<std::size_t>(i)] =
            g.strides[static_cast<std::size_t>(i + 1)] * g.nodes[static_cast<std::size_t>(i + 1)];
    return g;
}

namespace {

double node_volume(const NodeGrid& g) {
    double v = 1.0;
    for (double h : g.spacing) v *= h;
    return v;
}

void require_zero_boundary(const NodeField& f) {
    const NodeGrid& g = f.grid;
    std::vector<int> idx(static_cast<std::size_t>(g.N), 0);
    for (std::int64_t k = 0; k < g.total; ++k) {
        bool boundary = false;
        for (int i = 0; i < g.N; ++i)
            boundary = boundary || idx[static_cast<std::size_t>(i)] == 0 ||
                       idx[static_cast<std::size_t>(i)] == g.nodes[static_cast<std::size_t>(i)] - 1;
        if (boundary && f.values[static_cast<std::size_t>(k)] != 0.0)
            throw contract_error("field must vanish on the boundary nodes");
        for (int i = g.N - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < g.nodes[static_cast<std::size_t>(i)])
                break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
}

/// (sum over nodes |u|^q * prod h)^{1/q}
double lq_norm(const NodeField& f, double q) {
    std::vector<double> buf(f.values.size());
    for (std::size_t k = 0; k < f.values.size(); ++k)
        buf[k] = std::pow(std::abs(f.values[k]), q);
    return std::pow(pairwise_sum(buf) * node_volume(f.grid), 1.0 / q);
}

/// sum over forward-difference positions of |D_i |u|^{alpha}|^{p} * prod h
double grad_power_sum(const NodeField& f, int axis, double alpha, double p) {
    const NodeGrid& g = f.grid;
    const double inv_h = 1.0 / g.spacing[static_cast<std::size_t>(axis)];
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(g.total));
    std::vector<int> idx(static_cast<std::size_t>(g.N), 0);
    const std::int64_t stride = g.strides[static_cast<std::size_t>(axis)];
    for (std::int64_t k = 0; k < g.total; ++k) {
        if (idx[static_cast<std::size_t>(axis)] <
            g.nodes[static_cast<std::size_t>(axis)] - 1) {
            const double w0 = std::pow(std::abs(f.values[static_cast<std::size_t>(k)]), alpha);
            const double w1 = std::pow(std::abs(f.values[static_cast<std::size_t>(k + stride)]), alpha);
            buf.push_back(std::pow(std::abs((w1 - w0) * inv_h), p));
        }
        for (int i = g.N - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < g.nodes[static_cast<std::size_t>(i)])
                break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return pairwise_sum(buf) * node_volume(g);
}

} // namespace

std::pair<double, double> elliptic_sides(const NodeField& field, const SobolevParams& params) {
    if (field.grid.N != params.N)
        throw contract_error("field dimension must match parameter dimension");
    require_zero_boundary(field);
    const double lhs = lq_norm(field, params.p_star_alpha);
    double rhs = 1.0;
    for (int i = 0; i < params.N; ++i) {
        const double s = grad_power_sum(field, i, params.alpha[static_cast<std::size_t>(i)],
                                        params.p[static_cast<std::size_t>(i)]);
        rhs *= std::pow(std::pow(s, 1.0 / params.p[static_cast<std::size_t>(i)]),
                        1.0 / params.alpha_tilde);
    }
    return {lhs, rhs};
}

std::pair<double, double> parabolic_sides(const std::vector<NodeField>& slices, double T,
                                          const SobolevParams& params) {
    if (slices.empty())
        throw contract_error("space-time field needs at least one slice");
    if (!(T > 0.0))
        throw contract_error("horizon must be positive");
    const double dt = T / static_cast<double>(slices.size());
    const double vol = node_volume(slices.front().grid);

    double lhs = 0.0;
    double sup_sigma = 0.0;
    std::vector<double> grads(static_cast<std::size_t>(params.N), 0.0);
    for (const NodeField& f : slices) {
        if (f.grid.N != params.N)
            throw contract_error("slice dimension must match parameter dimension");
        require_zero_boundary(f);
        std::vector<double> bq(f.values.size()), bs(f.values.size());
        for (std::size_t k = 0; k < f.values.size(); ++k) {
            const double a = std::abs(f.values[k]);
            bq[k] = std::pow(a, params.q);
            bs[k] = std::pow(a, params.sigma);
        }
        lhs += pairwise_sum(bq) * vol * dt;
        sup_sigma = std::max(sup_sigma, pairwise_sum(bs) * vol);
        for (int i = 0; i < params.N; ++i)
            grads[static_cast<std::size_t>(i)] +=
                grad_power_sum(f, i, params.alpha[static_cast<std::size_t>(i)],
                               params.p[static_cast<std::size_t>(i)]) * dt;
    }

    const double tp = params.theta * params.pbar_star;
    double rhs = std::pow(T, 1.0 - tp / params.pbar) * std::pow(sup_sigma, 1.0 - params.theta);
    for (int i = 0; i < params.N; ++i)
        rhs *= std::pow(grads[static_cast<std::size_t>(i)],
                        tp / (params.N * params.p[static_cast<std::size_t>(i)]));
    return {lhs, rhs};
}

NodeField sample_bump_field(SplitMix64& rng, const NodeGrid& grid) {
    NodeField f;
    f.grid = grid;
    f.values.assign(static_cast<std::size_t>(grid.total), 0.0);

    const int bumps = 1 + static_cast<int>(rng.next_below(4));
    struct Bump {
        std::vector<double> c, w;
        double A;
    };
    std::vector<Bump> all;
    for (int b = 0; b < bumps; ++b) {
        Bump bump;
        for (int i = 0; i < grid.N; ++i) {
            bump.c.push_back(rng.next_in(0.15, 0.85));
            bump.w.push_back(std::pow(10.0, rng.next_in(-1.3, -0.4))); // widths 0.05 .. 0.4
        }
        bump.A = std::pow(10.0, rng.next_in(-1.0, 1.0));
        if (rng.next_double() < 0.5) bump.A = -bump.A;
        all.push_back(bump);
    }

    std::vector<int> idx(static_cast<std::size_t>(grid.N), 0);
    for (std::int64_t k = 0; k < grid.total; ++k) {
        bool boundary = false;
        for (int i = 0; i < grid.N; ++i)
            boundary = boundary || idx[static_cast<std::size_t>(i)] == 0 ||
                       idx[static_cast<std::size_t>(i)] == grid.nodes[static_cast<std::size_t>(i)] - 1;
        if (!boundary) {
            double v = 0.0;
            for (const Bump& bump : all) {
                double w = bump.A;
                for (int i = 0; i < grid.N; ++i) {
                    const double x = static_cast<double>(idx[static_cast<std::size_t>(i)]) *
                                     grid.spacing[static_cast<std::size_t>(i)];
                    const double r = (x - bump.c[static_cast<std::size_t>(i)]) /
                                     bump.w[static_cast<std::size_t>(i)];
                    const double s = std::max(0.0, 1.0 - r * r);
                    w *= s * s;
                }
                v += w;
            }
            f.values[static_cast<std::size_t>(k)] = v;
        }
        for (int i = grid.N - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < grid.nodes[static_cast<std::size_t>(i)])
                break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return f;
}

namespace {

void accumulate_ratio(ConstantEstimate& est, double lhs, double rhs) {
    double ratio;
    if (rhs == 0.0) {
        if (lhs == 0.0) {
            ratio = 0.0;
        } else {
            ++est.violations;
            est.ratios.push_back(std::numeric_limits<double>::infinity());
            return;
        }
    } else {
        ratio = lhs / rhs;
    }
    if (!std::isfinite(ratio)) {
        ++est.violations;
        est.ratios.push_back(ratio);
        return;
    }
    est.ratios.push_back(ratio);
    est.max_ratio = std::max(est.max_ratio, ratio);
}

} // namespace

ConstantEstimate estimate_constant(std::uint64_t seed, int trials,
                                   const SobolevParams& params, const NodeGrid& grid) {
    if (trials < 1)
        throw contract_error("trials must be >= 1");
    ConstantEstimate est;
    SplitMix64 master(seed);
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = master.derive(static_cast<std::uint64_t>(t));
        const NodeField f = sample_bump_field(rng, grid);
        const auto [lhs, rhs] = elliptic_sides(f, params);
        accumulate_ratio(est, lhs, rhs);
    }
    return est;
}

ConstantEstimate estimate_constant_parabolic(std::uint64_t seed, int trials,
                                             const SobolevParams& params, const NodeGrid& grid,
                                             int slices, double T) {
    if (trials < 1)
        throw contract_error("trials must be >= 1");
    if (slices < 1)
        throw contract_error("slices must be >= 1");
    ConstantEstimate est;
    SplitMix64 master(seed);
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = master.derive(0x100000000ULL + static_cast<std::uint64_t>(t));
        std::vector<NodeField> field;
        for (int k = 0; k < slices; ++k)
            field.push_back(sample_bump_field(rng, grid));
        const auto [lhs, rhs] = parabolic_sides(field, T, params);
        accumulate_ratio(est, lhs, rhs);
    }
    return est;
}

} // namespace aniso
