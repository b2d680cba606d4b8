#pragma once

#include <cstdint>
#include <vector>

#include "aniso/diagnostics.hpp"
#include "aniso/flux.hpp"
#include "aniso/grid.hpp"

namespace aniso {

/// Worst-case stable explicit time step
///   safety * min_i h_i^2 / (2 N D_i),
/// where D_i = (p_i - 1) (2 M0 / h_i)^{p_i - 2} caps the effective
/// diffusivity at the largest achievable difference quotient 2 M0 / h_i
/// (M0 = max |u|). Singular axes (p_i < 2) instead cap the quotient from
/// below by the gradient floor h_i * 1e-8, where their diffusivity peaks.
/// Returns fallback_dt for an identically zero field.
double stable_dt(const ScalarField& field, const FluxModel& flux, double safety,
                 double fallback_dt = 1e-6);

/// One conservative explicit Euler step:
///   u'_k = u_k + dt * sum_i (F_{i,k+1/2} - F_{i,k-1/2}) / h_i
/// with face fluxes F from one-sided difference quotients and zero flux
/// through the outer box faces, so the discrete mass telescopes exactly.
/// Throws numerical_error when the one-cell boundary collar is nonzero
/// (support reached the boundary; the box no longer approximates free
/// space) or when a nonfinite value appears (instability).
ScalarField step_explicit(const ScalarField& field, const FluxModel& flux, double dt);

struct RunParams {
    double horizon = 1.0;
    double safety = 0.4;
    double fallback_dt = 1e-6;
    int cadence = 481;                ///< number of diagnostic sample times
    double cadence_first_frac = 1e-4; ///< first sample at frac * horizon (geometric spacing)
    double epsilon = 0.0;             ///< absolute support threshold
    double epsilon_rel = 0.0;         ///< threshold relative to the running max (max of both wins)
    double support_floor_rel = 0.0;   ///< flush-to-zero floor relative to current max (0 = off)
    double collar_rel = 0.0;          ///< boundary abort fires on |u| > collar_rel * current
                                      ///< max in the outermost layer (0 = any nonzero; weakly
                                      ///< degenerate axes shed a negligible tail that pools
                                      ///< harmlessly at the zero-flux walls)
    int snapshot_every = 0;           ///< keep every k-th sampled snapshot (0 = none)
};

struct RunSetup {
    Grid grid;
    FluxModel flux;
    InitialShape shape = InitialShape::box_bump;
    std::vector<double> R0;
    double amplitude = 0.0;
    double separation = 0.0;
    RunParams run;
};

struct Trajectory {
    std::vector<ScalarField> snapshots; ///< decimated; empty unless requested
    NormSeries norms;
    SupportSeries support;
    double epsilon_used = 0.0;          ///< threshold at t = 0 (epsilon_rel then decays with the peak)
    std::uint64_t steps = 0;
    double min_dt = 0.0, max_dt = 0.0;
};

/// Advances the initial datum to the horizon with adaptive stable_dt,
/// sampling diagnostics on a geometric time ladder (plus t = 0). Fully
/// deterministic for a fixed setup. Errors from step_explicit propagate
/// with the failing time attached.
Trajectory run(const RunSetup& setup);

} // namespace aniso
