#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "aniso/rng.hpp"

namespace aniso {

/// Parameters of the anisotropic embedding inequalities. Derived fields are
/// filled by make_sobolev_params and kept consistent:
///   alpha_tilde = sum alpha_i,  p_star_alpha = pbar* alpha_tilde / N,
///   q = theta p_star_alpha + sigma (1 - theta).
struct SobolevParams {
    int N = 0;
    std::vector<double> p;
    std::vector<double> alpha;
    double sigma = 1.0;           ///< in [1, p_star_alpha]
    double theta = 0.0;           ///< in [0, pbar/pbar_star]
    double pbar = 0.0;
    double pbar_star = 0.0;
    double alpha_tilde = 0.0;
    double p_star_alpha = 0.0;
    double q = 0.0;
};

/// Validates pbar < N, alpha_i > 0, and the sigma/theta ranges.
SobolevParams make_sobolev_params(std::vector<double> p, std::vector<double> alpha,
                                  double sigma = 1.0, double theta = 0.0);

/// Node-centered grid on the unit box [0,1]^N; nodes_i points per axis
/// including both boundary nodes, spacing 1/(nodes_i - 1).
struct NodeGrid {
    int N = 0;
    std::vector<int> nodes;
    std::vector<double> spacing;
    std::vector<std::int64_t> strides;
    std::int64_t total = 0;
};

NodeGrid make_node_grid(std::vector<int> nodes);

/// Scalar values on the nodes of a NodeGrid; admissible fields vanish on
/// the boundary nodes.
struct NodeField {
    NodeGrid grid;
    std::vector<double> values;
};

/// Both sides of the stationary embedding
///   ||u||_{p_star_alpha}  <=  C prod_i || D_i |u|^{alpha_i)} ||_{p_i}^{1/alpha_tilde}
/// with forward differences (power first, then difference). Throws
/// contract_error when the field does not vanish on the boundary.
std::pair<double, double> elliptic_sides(const NodeField& field, const SobolevParams& params);

/// Both sides of the space-time embedding for slices u(., t_k), k = 0..K-1,
/// sampled uniformly with dt = T/K:
///   integral |u|^q  <=  C T^{1-theta pbar*/pbar} (sup_k integral |u|^sigma)^{1-theta}
///                        prod_i (integral |D_i |u|^{alpha_i}|^{p_i})^{theta pbar*/(N p_i)}.
std::pair<double, double> parabolic_sides(const std::vector<NodeField>& slices, double T,
                                          const SobolevParams& params);

/// Random admissible field: 1-4 smooth product bumps with log-uniform
/// widths and amplitudes (random sign), clipped to zero on the boundary
/// nodes. Spans spread-out and concentrated profiles.
NodeField sample_bump_field(SplitMix64& rng, const NodeGrid& grid);

struct ConstantEstimate {
    double max_ratio = 0.0;
    int violations = 0;   ///< lhs > 0 with rhs = 0, or nonfinite ratio
    std::vector<double> ratios;
};

/// Max of lhs/rhs over seeded random admissible fields (ratio 0 when both
/// sides vanish). Per-trial seeds derive from the master seed, so the
/// estimate is independent of evaluation order.
ConstantEstimate estimate_constant(std::uint64_t seed, int trials,
                                   const SobolevParams& params, const NodeGrid& grid);

/// Space-time variant: each trial draws `slices` random fields and applies
/// parabolic_sides with horizon T.
ConstantEstimate estimate_constant_parabolic(std::uint64_t seed, int trials,
                                             const SobolevParams& params, const NodeGrid& grid,
                                             int slices, double T);

} // namespace aniso
