#pragma once

#include <vector>

namespace aniso {

/// Scaling parameters of the self-similar ansatz u(x, t) = t^{-alpha}
/// U(x_1 t^{beta}), tied by the relation (p - 2) alpha = 1 + p beta.
struct SelfSimilarParams {
    double p = 3.0;
    double alpha = 4.0;
    double beta = 1.0;
};

/// Derives alpha from (p, beta). Requires p > 2, beta > 0.
SelfSimilarParams make_selfsim_params(double p, double beta);

/// Constants of the invariant cone
///   C = { (U, V) : 0 <= U <= b (s-1)^{(p-1)/(p-2)},
///                  a (s-1)^{(p-1)/(p-2)} <= V <= b (s-1)^{(p-1)/(p-2)} }
/// on [1, 1+delta].
struct ConeConstants {
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;
    double delta_bar = 0.5;
};

/// a and b solve ((p-1)/(p-2)) c^{(p-2)/(p-1)} = beta/2 resp. max{1, 2 beta};
/// delta = min(delta_bar, beta a^{1/(p-1)} (2p-3) / (2 alpha b (p-1))).
ConeConstants cone_constants(double p, double beta, double delta_bar = 0.5);

/// Profile pair (U, V) on a uniform s-grid; V is the flux |U'|^{p-2} U'.
struct SelfSimilarTrajectory {
    std::vector<double> s, U, V;
};

/// Inverse flux map U' = Phi(V) = |V|^{(2-p)/(p-1)} V, with Phi(0) = 0.
double inverse_flux(double V, double p);

/// Picard iteration for the integral fixed point of
///   U' = Phi(V),  V' = -alpha U + beta Phi(V) s
/// on [1, 1+delta], started from the cone's lower edge (U, V) =
/// (0, a (s-1)^{(p-1)/(p-2)}) and integrated with trapezoids on a uniform
/// grid of ceil(nodes_per_unit * delta) intervals. Stops when the sup-norm
/// change drops below tol. Every iterate is verified inside the cone (up to
/// quadrature roundoff slack); leaving it signals a formula bug and throws.
SelfSimilarTrajectory picard_iterate(const SelfSimilarParams& params,
                                     const ConeConstants& cone,
                                     int nodes_per_unit = 10000,
                                     double tol = 1e-10, int max_iter = 200,
                                     int* iterations = nullptr,
                                     double* residual = nullptr);

/// Continues the ODE system from the end of `traj` up to S_max with
/// adaptive embedded RK4 (step doubling + Richardson), sampled on the same
/// uniform spacing. Throws numerical_error with the failing s if the state
/// stops being finite. S_max at or below the end of `traj` returns it
/// unchanged.
SelfSimilarTrajectory extend(const SelfSimilarTrajectory& traj,
                             const SelfSimilarParams& params, double S_max,
                             double step_tol = 1e-10);

/// Energy (alpha/2) U^2 + ((p-1)/p) |V|^{p/(p-1)}, whose s-derivative along
/// solutions is beta |V|^{2/(p-1)} s >= 0.
double energy(const SelfSimilarParams& params, double U, double V);

struct CheckResult {
    bool ok = false;
    double first_bad_s = 0.0; ///< meaningful when !ok
    double max_dev = 0.0;
};

/// Centered-difference derivative of the energy matches
/// beta |V|^{2/(p-1)} s within tol * (1 + |E|) at interior nodes, and E is
/// nondecreasing along the grid.
CheckResult energy_monotone_check(const SelfSimilarTrajectory& traj,
                                  const SelfSimilarParams& params, double tol);

/// Finite-difference U' matches Phi(V) within tol at all nodes away from
/// s = 1 (the first few nodes are skipped; the profile is only Hoelder
/// there). One-sided differences at the range ends.
CheckResult flux_consistency_check(const SelfSimilarTrajectory& traj,
                                   const SelfSimilarParams& params, double tol);

/// Glued space-time solution u(x, t) = t^{-alpha} U(x_1 t^{beta}) for
/// x_1 t^{beta} >= 1 and 0 otherwise; U interpolated linearly in s.
struct SelfSimilarSolution {
    SelfSimilarTrajectory traj;
    SelfSimilarParams params;
    double S_max = 0.0;

    /// Value at (x_1, t), t > 0. Throws contract_error when x_1 t^beta
    /// exceeds the covered range S_max.
    double operator()(double x1, double t) const;

    /// Support predicate: exactly { x_1 >= t^{-beta} }.
    bool in_support(double x1, double t) const;
};

SelfSimilarSolution build_solution(SelfSimilarTrajectory traj, SelfSimilarParams params);

/// Space-time window for the residual study, strictly inside the support
/// and the covered range: every stencil point must satisfy
/// 1 + margin <= x t^beta <= S_max.
struct ResidualWindow {
    double x0 = 0.0, x1 = 0.0;
    double t0 = 0.0, t1 = 0.0;
    double margin = 0.05;
};

/// Max over the window grid of the centered-difference residual
/// |u_t - (|u_x|^{p-2} u_x)_x| with spacings (hx, ht). Decreases under
/// refinement exactly when the scaling relation holds.
double residual_check(const SelfSimilarSolution& solution, const ResidualWindow& window,
                      double hx, double ht);

} // namespace aniso
