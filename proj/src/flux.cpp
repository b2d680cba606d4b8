#include "aniso/flux.hpp"

#include <cmath>

#include "aniso/errors.hpp"
#include "aniso/rng.hpp"

namespace aniso {

FluxKind parse_flux_kind(const std::string& name) {
    if (name == "orthotropic") return FluxKind::orthotropic;
    if (name == "perturbed") return FluxKind::perturbed;
    throw config_error("unknown flux kind '" + name + "'");
}

FluxModel make_flux(FluxKind kind, std::vector<double> p, double Lambda,
                    std::uint64_t seed) {
    if (p.empty())
        throw profile_error("flux needs at least one exponent");
    for (double pi : p)
        if (!(pi > 1.0))
            throw profile_error("flux exponents must exceed 1");
    if (!(Lambda >= 1.0))
        throw profile_error("ellipticity constant must be >= 1");
    FluxModel f;
    f.kind = kind;
    f.p = std::move(p);
    f.Lambda = Lambda;
    f.seed = seed;
    if (kind == FluxKind::perturbed) {
        SplitMix64 rng(seed);
        for (std::size_t i = 0; i < f.p.size(); ++i) {
            std::array<double, 3> c{};
            c[0] = rng.next_in(0.5, 5.0);   // spatial frequency
            c[1] = rng.next_in(0.5, 5.0);   // value coupling
            c[2] = rng.next_in(0.0, 6.283185307179586); // phase
            f.wobble.push_back(c);
        }
    }
    return f;
}

double odd_power(double z, double p) {
    if (z == 0.0) return 0.0;
    return std::pow(std::abs(z), p - 2.0) * z;
}

double flux_face(const FluxModel& flux, int axis, double z,
                 double x_face, double u_face) {
    if (!std::isfinite(z))
        throw contract_error("difference quotient must be finite");
    const double base = odd_power(z, flux.p[static_cast<std::size_t>(axis)]);
    if (flux.kind == FluxKind::orthotropic)
        return base;
    const auto& c = flux.wobble[static_cast<std::size_t>(axis)];
    const double s = std::sin(c[0] * x_face + c[1] * u_face + c[2]);
    return std::pow(flux.Lambda, s) * base;
}

bool envelope_check(const std::function<double(int, double, double, double)>& A,
                    const std::vector<double>& p, double Lambda,
                    int sample_count, std::uint64_t seed,
                    EnvelopeCounterexample* out) {
    if (sample_count < 1)
        throw contract_error("sample_count must be >= 1");
    SplitMix64 rng(seed);
    const double inv_Lambda = 1.0 / Lambda;
    // Inequalities are scale-sensitive near z = 0 and for large z; sample z
    // log-uniformly over many decades with random sign, plus the exact zero.
    for (int s = 0; s < sample_count; ++s) {
        const int axis = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.size())));
        const double x = rng.next_in(-10.0, 10.0);
        const double u = rng.next_in(0.0, 10.0);
        double z;
        if (s % 16 == 0) {
            z = 0.0;
        } else {
            const double mag = std::pow(10.0, rng.next_in(-8.0, 4.0));
            z = (rng.next_double() < 0.5) ? -mag : mag;
        }
        const double pi = p[static_cast<std::size_t>(axis)];
        const double value = A(axis, x, u, z);
        const double az = std::abs(z);
        const bool lower_ok = value * z >= inv_Lambda * std::pow(az, pi) * (1.0 - 1e-12);
        const bool upper_ok = std::abs(value) <= Lambda * std::pow(az, pi - 1.0) * (1.0 + 1e-12);
        if (!lower_ok || !upper_ok) {
            if (out) {
                out->axis = axis;
                out->x = x;
                out->u = u;
                out->z = z;
                out->value = value;
            }
            return false;
        }
    }
    return true;
}

bool envelope_check(const FluxModel& flux, int sample_count,
                    std::uint64_t seed, EnvelopeCounterexample* out) {
    auto A = [&flux](int axis, double x, double u, double z) {
        return flux_face(flux, axis, z, x, u);
    };
    return envelope_check(A, flux.p, flux.Lambda, sample_count, seed, out);
}

} // namespace aniso
