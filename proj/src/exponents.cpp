#include "aniso/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

void require_valid_entries(const std::vector<double>& p) {
    if (p.empty())
        throw profile_error("exponent vector is empty");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 1.0)) {
            std::ostringstream msg;
            msg << "exponent p_" << (i + 1) << " = " << p[i] << " must exceed 1";
            throw profile_error(msg.str());
        }
    }
}

} // namespace

AnisotropyProfile make_profile(std::vector<double> p, double Lambda) {
    require_valid_entries(p);
    if (!(Lambda >= 1.0))
        throw profile_error("ellipticity constant must be >= 1");
    AnisotropyProfile profile;
    profile.N = static_cast<int>(p.size());
    profile.p = std::move(p);
    profile.Lambda = Lambda;
    return profile;
}

double harmonic_mean(const std::vector<double>& p) {
    require_valid_entries(p);
    double inv = 0.0;
    for (double pi : p) inv += 1.0 / pi;
    return static_cast<double>(p.size()) / inv;
}

double sobolev_conjugate(double pbar, int N) {
    if (!(pbar > 0.0) || !(pbar < static_cast<double>(N)))
        throw profile_error("Sobolev conjugate requires 0 < pbar < N");
    return static_cast<double>(N) * pbar / (static_cast<double>(N) - pbar);
}

DerivedExponents derive(const AnisotropyProfile& profile) {
    require_valid_entries(profile.p);
    DerivedExponents d;
    d.N = profile.N;
    d.pbar = harmonic_mean(profile.p);
    if (d.pbar < static_cast<double>(profile.N))
        d.pbar_star = sobolev_conjugate(d.pbar, profile.N);
    d.lambda = d.lambda_q(1.0);
    return d;
}

SupportExponents support_radius_exponents(const AnisotropyProfile& profile, int axis) {
    if (axis < 0 || axis >= profile.N)
        throw contract_error("axis out of range");
    const double pj = profile.p[static_cast<std::size_t>(axis)];
    if (!(pj > 2.0))
        throw contract_error("support radius law applies to slow directions only (p_j > 2)");
    const DerivedExponents d = derive(profile);
    if (!(d.lambda > 0.0))
        throw contract_error("support radius law requires lambda > 0");
    SupportExponents e;
    e.t_exponent = (d.N * (d.pbar - pj) + d.pbar) / (d.lambda * pj);
    e.mass_exponent = (d.pbar / pj) * (pj - 2.0) / d.lambda;
    return e;
}

double predicted_support_radius(const AnisotropyProfile& profile, int axis,
                                double t, double m1, double R0, double C) {
    if (!(t >= 0.0))
        throw contract_error("time must be nonnegative");
    if (!(m1 > 0.0))
        throw contract_error("initial mass must be positive");
    const SupportExponents e = support_radius_exponents(profile, axis);
    if (t == 0.0)
        return 2.0 * R0;
    return 2.0 * R0 + C * std::pow(t, e.t_exponent) * std::pow(m1, e.mass_exponent);
}

double predicted_linf_bound(const AnisotropyProfile& profile, double t,
                            double m1, double C) {
    if (!(t > 0.0))
        throw contract_error("sup-norm bound requires t > 0");
    if (!(m1 > 0.0))
        throw contract_error("initial mass must be positive");
    const DerivedExponents d = derive(profile);
    if (!(d.pbar_sigma(1.0) > 2.0))
        throw contract_error("sup-norm decay requires pbar(1+1/N) > 2");
    return C * std::pow(t, -d.N / d.lambda) * std::pow(m1, d.pbar / d.lambda);
}

SupportExponents support_measure_exponents(const AnisotropyProfile& profile) {
    const DerivedExponents d = derive(profile);
    if (!(d.lambda > 0.0))
        throw contract_error("support measure law requires lambda > 0");
    SupportExponents e;
    e.t_exponent = d.N / d.lambda;
    e.mass_exponent = d.N * (d.pbar - 2.0) / d.lambda;
    return e;
}

RecursionResult embedding_recursion(const std::vector<double>& p_sorted, double sigma) {
    require_valid_entries(p_sorted);
    if (!std::is_sorted(p_sorted.begin(), p_sorted.end()))
        throw contract_error("exponent vector must be sorted ascending");
    const int N = static_cast<int>(p_sorted.size());
    const double pbar = harmonic_mean(p_sorted);
    if (!(pbar < static_cast<double>(N)))
        throw contract_error("recursion requires pbar < N");
    const double pstar = sobolev_conjugate(pbar, N);
    if (!(sigma >= 1.0) || !(sigma <= pstar))
        throw contract_error("sigma must lie in [1, pbar*]");

    RecursionResult result;
    // Fixed points r_k: the value the sequence stalls at when the cascade
    // stops after absorbing the k smallest exponents.
    for (int k = 1; k <= N; ++k) {
        double inv = 0.0;
        for (int i = 0; i < k; ++i) inv += 1.0 / p_sorted[static_cast<std::size_t>(i)];
        result.cascade.push_back((static_cast<double>(k) + sigma) / inv);
    }

    const double pN = p_sorted.back();
    std::vector<double> pn(p_sorted.size(), p_sorted.front()); // p^1
    const int budget = 10 * N;
    for (int n = 1; n <= budget; ++n) {
        double inv = 0.0;
        for (double v : pn) inv += 1.0 / v;
        const double qn = (static_cast<double>(N) + sigma) / inv;
        result.q.push_back(qn);
        result.limit = qn;
        result.steps = n;
        if (qn >= pN) {
            result.verdict = true;
            return result;
        }
        // Cap the refreshed exponents by the original vector, not by the
        // previous iterate: the cascade re-tests every direction against
        // the current integrability level each round.
        for (std::size_t i = 0; i < pn.size(); ++i)
            pn[i] = std::min(p_sorted[i], qn);
    }
    result.verdict = false;
    return result;
}

FeasibilityReport feasibility(const AnisotropyProfile& profile) {
    const DerivedExponents d = derive(profile);
    FeasibilityReport r;
    r.pbar_lt_N = d.pbar < static_cast<double>(profile.N);
    for (int j = 0; j < profile.N; ++j)
        if (profile.p[static_cast<std::size_t>(j)] > 2.0)
            r.slow_directions.push_back(j + 1);
    const double pmax = *std::max_element(profile.p.begin(), profile.p.end());
    const double pbar1 = d.pbar_sigma(1.0);
    const double pbar2 = d.pbar_sigma(2.0);
    r.condp2_ok = pmax < pbar1;
    r.boundedness_ok = std::max(2.0, pmax) < pbar2;
    r.pbar1_gt_2 = pbar1 > 2.0;
    r.pbar2_gt_2 = pbar2 > 2.0;
    return r;
}

} // namespace aniso
