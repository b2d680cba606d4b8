#pragma once

#include <vector>

namespace aniso {

/// Parameters of the fast geometric convergence recursion
///   Z_{n+1} = C * b^n * (1/m) * sum_i Z_n^{1+beta_i},   m = #betas.
struct RecursionSpec {
    double C = 2.0;             ///< > 1
    double b = 2.0;             ///< > 1
    std::vector<double> betas;  ///< positive exponents; beta = min entry
    double Z0 = 0.0;            ///< starting value >= 0
};

/// Smallness threshold C^{-1/beta} * b^{-1/beta^2} with beta = min beta_i.
/// Starting at or below it forces Z_n -> 0.
double threshold(const RecursionSpec& spec);

enum class IterationVerdict { converged, diverged, undecided };

struct IterationResult {
    std::vector<double> Z;  ///< Z_0 .. Z_n (stops early on divergence)
    IterationVerdict verdict = IterationVerdict::undecided;
};

/// Iterates the recursion with equality (the worst case among all
/// dominated sequences). converged when Z_{n_max} < 1e-12, diverged as soon
/// as any Z_n > 1e12, undecided otherwise.
IterationResult simulate(const RecursionSpec& spec, int n_max);

} // namespace aniso
