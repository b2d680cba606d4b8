#pragma once

#include <optional>
#include <vector>

namespace aniso {

/// Direction-dependent diffusion exponents p_i with ellipticity constant
/// Lambda. The flux along axis i grows like |z_i|^{p_i - 1} inside the
/// envelope [Lambda^{-1}, Lambda].
struct AnisotropyProfile {
    int N = 0;                ///< space dimension
    std::vector<double> p;    ///< one exponent per axis, each > 1
    double Lambda = 1.0;      ///< ellipticity constant >= 1
};

/// Validates entries (p_i > 1, Lambda >= 1) and infers N from the vector.
/// Throws profile_error on violation.
AnisotropyProfile make_profile(std::vector<double> p, double Lambda = 1.0);

/// Harmonic mean pbar = N / sum(1/p_i). Throws profile_error if any entry <= 1.
double harmonic_mean(const std::vector<double>& p);

/// Sobolev conjugate N*pbar/(N-pbar). Throws profile_error unless 0 < pbar < N.
double sobolev_conjugate(double pbar, int N);

/// Exponents derived from a profile. lambda = N(pbar-2)+pbar governs all
/// decay and propagation rates; pbar_star exists only in the regime pbar < N.
struct DerivedExponents {
    int N = 0;
    double pbar = 0.0;
    std::optional<double> pbar_star; ///< N*pbar/(N-pbar) when pbar < N
    double lambda = 0.0;             ///< N(pbar-2) + pbar

    /// Critical parabolic exponent pbar(1 + sigma/N).
    double pbar_sigma(double sigma) const { return pbar * (1.0 + sigma / N); }
    /// Affine family N(pbar-2) + pbar*q; lambda is the q = 1 member.
    double lambda_q(double q) const { return N * (pbar - 2.0) + pbar * q; }
};

DerivedExponents derive(const AnisotropyProfile& profile);

/// A pair (t-exponent, mass-exponent) of a power law t^a * m1^b.
struct SupportExponents {
    double t_exponent = 0.0;
    double mass_exponent = 0.0;
};

/// Exponents of the directional support radius law along `axis` (0-based):
///   R_j(t) - 2 R0 ~ t^{(N(pbar-p_j)+pbar)/(lambda p_j)} * m1^{(pbar/p_j)(p_j-2)/lambda}.
/// Throws contract_error unless p_j > 2 (slow direction) and lambda > 0.
SupportExponents support_radius_exponents(const AnisotropyProfile& profile, int axis);

/// Evaluates the directional support radius bound
///   2 R0 + C * t^{a_j} * m1^{b_j}
/// with (a_j, b_j) from support_radius_exponents.
double predicted_support_radius(const AnisotropyProfile& profile, int axis,
                                double t, double m1, double R0, double C = 1.0);

/// Sup-norm decay bound C * t^{-N/lambda} * m1^{pbar/lambda}. Requires t > 0
/// and the decay regime pbar(1+1/N) > 2.
double predicted_linf_bound(const AnisotropyProfile& profile, double t,
                            double m1, double C = 1.0);

/// Exponents of the support-volume law: (N/lambda, N(pbar-2)/lambda).
/// Equals the componentwise sums of support_radius_exponents over all axes
/// when every direction is slow.
SupportExponents support_measure_exponents(const AnisotropyProfile& profile);

/// Outcome of the critical-exponent recursion that decides whether the
/// integrability cascade reaches the top exponent p_N.
struct RecursionResult {
    std::vector<double> q;       ///< q^1, q^2, ... (one per completed step)
    bool verdict = false;        ///< true iff some q^n >= p_N within budget
    int steps = 0;               ///< index n at which the verdict fired (or budget)
    double limit = 0.0;          ///< last q^n computed (the stall value if false)
    std::vector<double> cascade; ///< fixed points r_k = (k+sigma)/sum_{i<=k} 1/p_i
};

/// Iterates p^1 = (p_1,...,p_1), q^n = (N+sigma)/sum(1/p^n_i),
/// p^{n+1} = p ∧ q^n (componentwise minimum with the ORIGINAL exponents;
/// the recursion is monotone and its fixed points are the cascade values
/// r_k). Budget: 10*N steps. Requires p sorted ascending, pbar < N, and
/// sigma in [1, pbar*].
RecursionResult embedding_recursion(const std::vector<double>& p_sorted, double sigma);

/// Regime booleans controlling which parts of the theory apply.
struct FeasibilityReport {
    bool pbar_lt_N = false;
    std::vector<int> slow_directions; ///< 1-based axis labels with p_j > 2
    bool condp2_ok = false;           ///< p_max < pbar(1+1/N)
    bool boundedness_ok = false;      ///< max{2, p_max} < pbar(1+2/N)
    bool pbar1_gt_2 = false;          ///< pbar(1+1/N) > 2
    bool pbar2_gt_2 = false;          ///< pbar(1+2/N) > 2
};

FeasibilityReport feasibility(const AnisotropyProfile& profile);

} // namespace aniso
