#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace aniso {

enum class FluxKind { orthotropic, perturbed };

FluxKind parse_flux_kind(const std::string& name);

/// Per-axis flux family A_i(x, u, z). Both kinds satisfy the growth
/// envelope  A_i(x,u,z) z >= Lambda^{-1} |z|^{p_i}  and
/// |A_i(x,u,z)| <= Lambda |z|^{p_i - 1}.
///  - orthotropic: A_i = |z|^{p_i-2} z (envelope equality at Lambda = 1).
///  - perturbed:   A_i = Lambda^{sin(a_i x + b_i u + c_i)} |z|^{p_i-2} z with
///    seeded coefficients; the prefactor stays inside [Lambda^{-1}, Lambda].
struct FluxModel {
    FluxKind kind = FluxKind::orthotropic;
    std::vector<double> p;
    double Lambda = 1.0;
    std::uint64_t seed = 0;
    std::vector<std::array<double, 3>> wobble; ///< per-axis (a_i, b_i, c_i), perturbed kind
};

/// Validates exponents (p_i > 1, Lambda >= 1; perturbed needs Lambda > 1 to
/// be distinguishable but any Lambda >= 1 is accepted) and derives the
/// perturbation coefficients from the seed.
FluxModel make_flux(FluxKind kind, std::vector<double> p, double Lambda = 1.0,
                    std::uint64_t seed = 0);

/// Odd power z |z|^{p-2}, with the degenerate/singular point defined as 0.
double odd_power(double z, double p);

/// Face flux along `axis` for difference quotient z at face position x_face
/// with face-averaged value u_face. The extra arguments only matter for the
/// perturbed kind.
double flux_face(const FluxModel& flux, int axis, double z,
                 double x_face = 0.0, double u_face = 0.0);

/// First sampled point violating the growth envelope, if any.
struct EnvelopeCounterexample {
    int axis = -1;
    double x = 0.0, u = 0.0, z = 0.0;
    double value = 0.0;
};

/// Samples (x, u, z) pseudo-randomly from a seeded stream and checks both
/// envelope inequalities. Returns true iff all samples pass; on failure the
/// first counterexample is stored in `out` when provided.
bool envelope_check(const FluxModel& flux, int sample_count,
                    std::uint64_t seed = 42,
                    EnvelopeCounterexample* out = nullptr);

/// Same check against an arbitrary flux function A(axis, x, u, z); used to
/// probe hand-built models (including deliberately violating fixtures).
bool envelope_check(const std::function<double(int, double, double, double)>& A,
                    const std::vector<double>& p, double Lambda,
                    int sample_count, std::uint64_t seed = 42,
                    EnvelopeCounterexample* out = nullptr);

} // namespace aniso
