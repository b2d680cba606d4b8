#include "aniso/selfsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "aniso/errors.hpp"

namespace aniso {

SelfSimilarParams make_selfsim_params(double p, double beta) {
    if (!(p > 2.0))
        throw contract_error("self-similar construction requires p > 2");
    if (!(beta > 0.0))
        throw contract_error("beta must be positive");
    SelfSimilarParams params;
    params.p = p;
    params.beta = beta;
    params.alpha = (1.0 + p * beta) / (p - 2.0);
    return params;
}

ConeConstants cone_constants(double p, double beta, double delta_bar) {
    const SelfSimilarParams params = make_selfsim_params(p, beta);
    if (!(delta_bar > 0.0) || !(delta_bar < 1.0))
        throw contract_error("delta_bar must lie in (0, 1)");
    const double kappa = (p - 1.0) / (p - 2.0);
    ConeConstants cone;
    cone.delta_bar = delta_bar;
    cone.b = std::pow((p - 2.0) / (p - 1.0) * std::max(1.0, 2.0 * beta), kappa);
    cone.a = std::pow((p - 2.0) / (p - 1.0) * (beta / 2.0), kappa);
    const double cap = beta * std::pow(cone.a, 1.0 / (p - 1.0)) * (2.0 * p - 3.0) /
                       (2.0 * params.alpha * cone.b * (p - 1.0));
    cone.delta = std::min(delta_bar, cap);
    return cone;
}

double inverse_flux(double V, double p) {
    if (V == 0.0) return 0.0;
    return std::pow(std::abs(V), (2.0 - p) / (p - 1.0)) * V;
}

namespace {

double cone_power(double s_minus_1, double p) {
    return std::pow(s_minus_1, (p - 1.0) / (p - 2.0));
}

void check_in_cone(const SelfSimilarTrajectory& x, const SelfSimilarParams& params,
                   const ConeConstants& cone) {
    // Quadrature and roundoff can graze the cone walls; the construction
    // itself keeps exact iterates strictly inside except at s = 1.
    for (std::size_t i = 0; i < x.s.size(); ++i) {
        const double shape = cone_power(x.s[i] - 1.0, params.p);
        const double lo_V = cone.a * shape;
        const double hi = cone.b * shape;
        const double slack = 1e-12 * (1.0 + hi);
        if (x.U[i] < -slack || x.U[i] > hi + slack || x.V[i] < lo_V - slack ||
            x.V[i] > hi + slack)
            throw numerical_error("iterate left the invariant cone", x.s[i]);
    }
}

struct Rhs {
    double p, alpha, beta;
    std::array<double, 2> operator()(double s, const std::array<double, 2>& y) const {
        const double phi = inverse_flux(y[1], p);
        return {phi, -alpha * y[0] + beta * phi * s};
    }
};

std::array<double, 2> rk4_step(const Rhs& f, double s, const std::array<double, 2>& y,
                               double h) {
    const auto k1 = f(s, y);
    const auto k2 = f(s + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const auto k3 = f(s + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const auto k4 = f(s + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

/// Advances from s_a to s_b with step doubling and Richardson correction.
std::array<double, 2> rk4_adaptive(const Rhs& f, double s_a, double s_b,
                                   std::array<double, 2> y, double tol) {
    double s = s_a;
    double h = s_b - s_a;
    int guard = 0;
    while (s < s_b) {
        h = std::min(h, s_b - s);
        const auto full = rk4_step(f, s, y, h);
        const auto half = rk4_step(f, s + 0.5 * h, rk4_step(f, s, y, 0.5 * h), 0.5 * h);
        const double err = std::max(std::abs(half[0] - full[0]), std::abs(half[1] - full[1]));
        const double scale = tol * (1.0 + std::max(std::abs(y[0]), std::abs(y[1])));
        if (err <= scale || h <= 1e-14 * (1.0 + std::abs(s))) {
            y = {half[0] + (half[0] - full[0]) / 15.0, half[1] + (half[1] - full[1]) / 15.0};
            s += h;
            const double grow = (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
            h *= std::clamp(grow, 0.2, 2.0);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(scale / err, 0.2));
        }
        if (++guard > 1000000)
            throw numerical_error("step control stalled during extension", s);
    }
    return y;
}

} // namespace

SelfSimilarTrajectory picard_iterate(const SelfSimilarParams& params,
                                     const ConeConstants& cone, int nodes_per_unit,
                                     double tol, int max_iter, int* iterations,
                                     double* residual) {
    if (!(tol > 0.0))
        throw contract_error("tolerance must be positive");
    if (max_iter < 1)
        throw contract_error("max_iter must be >= 1");
    if (nodes_per_unit < 1)
        throw contract_error("resolution must be positive");
    const int M = std::max(16, static_cast<int>(std::ceil(nodes_per_unit * cone.delta)));
    const double h = cone.delta / static_cast<double>(M);

    SelfSimilarTrajectory x;
    x.s.resize(static_cast<std::size_t>(M) + 1);
    x.U.assign(x.s.size(), 0.0);
    x.V.resize(x.s.size());
    for (std::size_t i = 0; i < x.s.size(); ++i) {
        x.s[i] = 1.0 + static_cast<double>(i) * h;
        x.V[i] = cone.a * cone_power(x.s[i] - 1.0, params.p);
    }
    check_in_cone(x, params, cone);

    std::vector<double> f1(x.s.size()), f2(x.s.size()), U_new(x.s.size()), V_new(x.s.size());
    double res = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iter; ++it) {
        for (std::size_t i = 0; i < x.s.size(); ++i) {
            const double phi = inverse_flux(x.V[i], params.p);
            f1[i] = phi;
            f2[i] = -params.alpha * x.U[i] + params.beta * phi * x.s[i];
        }
        U_new[0] = 0.0;
        V_new[0] = 0.0;
        for (std::size_t i = 1; i < x.s.size(); ++i) {
            U_new[i] = U_new[i - 1] + 0.5 * h * (f1[i - 1] + f1[i]);
            V_new[i] = V_new[i - 1] + 0.5 * h * (f2[i - 1] + f2[i]);
        }
        res = 0.0;
        for (std::size_t i = 0; i < x.s.size(); ++i)
            res = std::max({res, std::abs(U_new[i] - x.U[i]), std::abs(V_new[i] - x.V[i])});
        x.U = U_new;
        x.V = V_new;
        check_in_cone(x, params, cone);
        if (res < tol) {
            ++it;
            break;
        }
    }
    if (!(res < tol))
        throw numerical_error("fixed-point iteration did not converge", static_cast<double>(it));
    if (iterations) *iterations = it;
    if (residual) *residual = res;
    return x;
}

SelfSimilarTrajectory extend(const SelfSimilarTrajectory& traj,
                             const SelfSimilarParams& params, double S_max,
                             double step_tol) {
    if (traj.s.size() < 2)
        throw contract_error("trajectory must hold at least two nodes");
    if (S_max <= traj.s.back())
        return traj;
    const double h = traj.s[1] - traj.s[0];
    const Rhs f{params.p, params.alpha, params.beta};

    SelfSimilarTrajectory out = traj;
    std::array<double, 2> y{out.U.back(), out.V.back()};
    double s = out.s.back();
    while (s < S_max - 0.5 * h) {
        const double s_next = s + h;
        y = rk4_adaptive(f, s, s_next, y, step_tol);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
            throw numerical_error("extension produced a nonfinite state", s_next);
        out.s.push_back(s_next);
        out.U.push_back(y[0]);
        out.V.push_back(y[1]);
        s = s_next;
    }
    return out;
}

double energy(const SelfSimilarParams& params, double U, double V) {
    return 0.5 * params.alpha * U * U +
           (params.p - 1.0) / params.p * std::pow(std::abs(V), params.p / (params.p - 1.0));
}

CheckResult energy_monotone_check(const SelfSimilarTrajectory& traj,
                                  const SelfSimilarParams& params, double tol) {
    CheckResult r;
    if (traj.s.size() < 3) {
        r.ok = true;
        return r;
    }
    const double h = traj.s[1] - traj.s[0];
    std::vector<double> E(traj.s.size());
    for (std::size_t i = 0; i < traj.s.size(); ++i)
        E[i] = energy(params, traj.U[i], traj.V[i]);

    for (std::size_t i = 0; i + 1 < E.size(); ++i) {
        if (E[i + 1] < E[i] - 1e-12 * (1.0 + std::abs(E[i]))) {
            r.first_bad_s = traj.s[i + 1];
            return r;
        }
    }
    for (std::size_t i = 1; i + 1 < E.size(); ++i) {
        const double dE = (E[i + 1] - E[i - 1]) / (2.0 * h);
        const double rhs = params.beta *
                           std::pow(std::abs(traj.V[i]), 2.0 / (params.p - 1.0)) * traj.s[i];
        const double dev = std::abs(dE - rhs) / (1.0 + std::abs(E[i]));
        if (dev > r.max_dev) r.max_dev = dev;
        if (dev > tol) {
            r.first_bad_s = traj.s[i];
            return r;
        }
    }
    r.ok = true;
    return r;
}

CheckResult flux_consistency_check(const SelfSimilarTrajectory& traj,
                                   const SelfSimilarParams& params, double tol) {
    CheckResult r;
    const std::size_t n = traj.s.size();
    if (n < 4) {
        r.ok = true;
        return r;
    }
    const double h = traj.s[1] - traj.s[0];
    // Skip a neighborhood of s = 1: U' is only Hoelder continuous there.
    const std::size_t skip = std::max<std::size_t>(2, n / 100);
    for (std::size_t i = skip; i < n; ++i) {
        double du;
        if (i + 1 < n)
            du = (traj.U[i + 1] - traj.U[i - 1]) / (2.0 * h);
        else
            du = (traj.U[i] - traj.U[i - 1]) / h;
        const double dev = std::abs(du - inverse_flux(traj.V[i], params.p));
        if (dev > r.max_dev) {
            r.max_dev = dev;
            if (dev > tol) {
                r.first_bad_s = traj.s[i];
                return r;
            }
        }
    }
    r.ok = true;
    return r;
}

double SelfSimilarSolution::operator()(double x1, double t) const {
    if (!(t > 0.0))
        throw contract_error("evaluation requires t > 0");
    const double s = x1 * std::pow(t, params.beta);
    if (s < 1.0)
        return 0.0;
    if (s > S_max)
        throw contract_error("evaluation beyond the covered range S_max");
    const double h = traj.s[1] - traj.s[0];
    const double pos = (s - 1.0) / h;
    std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= traj.s.size()) i = traj.s.size() - 2;
    const double w = pos - static_cast<double>(i);
    const double U = (1.0 - w) * traj.U[i] + w * traj.U[i + 1];
    return std::pow(t, -params.alpha) * U;
}

bool SelfSimilarSolution::in_support(double x1, double t) const {
    if (!(t > 0.0))
        throw contract_error("support predicate requires t > 0");
    return x1 >= std::pow(t, -params.beta);
}

SelfSimilarSolution build_solution(SelfSimilarTrajectory traj, SelfSimilarParams params) {
    if (traj.s.size() < 2)
        throw contract_error("trajectory must hold at least two nodes");
    SelfSimilarSolution sol;
    sol.S_max = traj.s.back();
    sol.traj = std::move(traj);
    sol.params = params;
    return sol;
}

double residual_check(const SelfSimilarSolution& solution, const ResidualWindow& window,
                      double hx, double ht) {
    if (!(hx > 0.0) || !(ht > 0.0))
        throw contract_error("spacings must be positive");
    if (!(window.x1 > window.x0) || !(window.t1 > window.t0) || !(window.t0 > 0.0))
        throw contract_error("window must be nondegenerate with t0 > 0");
    const double beta = solution.params.beta;
    const double s_low = (window.x0 - hx) * std::pow(window.t0 - ht, beta);
    const double s_high = (window.x1 + hx) * std::pow(window.t1 + ht, beta);
    if (!(window.t0 - ht > 0.0) || !(s_low >= 1.0 + window.margin))
        throw contract_error("window touches the free boundary");
    if (!(s_high <= solution.S_max))
        throw contract_error("window exceeds the covered range S_max");

    const double p = solution.params.p;
    auto A = [p](double z) {
        return (z == 0.0) ? 0.0 : std::pow(std::abs(z), p - 2.0) * z;
    };

    double max_res = 0.0;
    const int nx = static_cast<int>(std::floor((window.x1 - window.x0) / hx)) + 1;
    const int nt = static_cast<int>(std::floor((window.t1 - window.t0) / ht)) + 1;
    for (int j = 0; j < nt; ++j) {
        const double t = window.t0 + j * ht;
        for (int i = 0; i < nx; ++i) {
            const double x = window.x0 + i * hx;
            const double ut = (solution(x, t + ht) - solution(x, t - ht)) / (2.0 * ht);
            const double zp = (solution(x + hx, t) - solution(x, t)) / hx;
            const double zm = (solution(x, t) - solution(x - hx, t)) / hx;
            const double div = (A(zp) - A(zm)) / hx;
            max_res = std::max(max_res, std::abs(ut - div));
        }
    }
    return max_res;
}

} // namespace aniso
