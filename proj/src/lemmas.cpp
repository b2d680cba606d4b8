#include "aniso/lemmas.hpp"

#include <algorithm>
#include <cmath>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

void validate(const RecursionSpec& spec) {
    if (!(spec.C > 1.0) || !(spec.b > 1.0))
        throw contract_error("recursion requires C > 1 and b > 1");
    if (spec.betas.empty())
        throw contract_error("recursion requires at least one beta");
    for (double beta : spec.betas)
        if (!(beta > 0.0))
            throw contract_error("recursion exponents beta_i must be positive");
    if (!(spec.Z0 >= 0.0))
        throw contract_error("Z0 must be nonnegative");
}

} // namespace

double threshold(const RecursionSpec& spec) {
    validate(spec);
    const double beta = *std::min_element(spec.betas.begin(), spec.betas.end());
    return std::pow(spec.C, -1.0 / beta) * std::pow(spec.b, -1.0 / (beta * beta));
}

IterationResult simulate(const RecursionSpec& spec, int n_max) {
    validate(spec);
    if (n_max < 1)
        throw contract_error("n_max must be >= 1");

    IterationResult result;
    result.Z.push_back(spec.Z0);
    const double m = static_cast<double>(spec.betas.size());
    double bn = 1.0; // b^n
    double Z = spec.Z0;
    for (int n = 0; n < n_max; ++n) {
        if (Z > 1e12) {
            result.verdict = IterationVerdict::diverged;
            return result;
        }
        double sum = 0.0;
        for (double beta : spec.betas) sum += std::pow(Z, 1.0 + beta);
        Z = spec.C * bn * sum / m;
        bn *= spec.b;
        result.Z.push_back(Z);
    }
    if (Z > 1e12)
        result.verdict = IterationVerdict::diverged;
    else if (Z < 1e-12)
        result.verdict = IterationVerdict::converged;
    else
        result.verdict = IterationVerdict::undecided;
    return result;
}

} // namespace aniso
