#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "aniso/errors.hpp"
#include "aniso/exponents.hpp"
#include "aniso/rng.hpp"

using namespace aniso;

namespace {

AnisotropyProfile profile(std::vector<double> p) { return make_profile(std::move(p)); }

} // namespace

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(make_profile({}), profile_error);
    CHECK_THROWS_AS(make_profile({2.0, 1.0}), profile_error);
    CHECK_THROWS_AS(make_profile({2.0, 0.5}), profile_error);
    CHECK_THROWS_AS(make_profile({2.0, 3.0}, 0.5), profile_error);
    const AnisotropyProfile pr = make_profile({2.2, 2.5, 2.8}, 2.0);
    CHECK(pr.N == 3);
    CHECK(pr.Lambda == 2.0);
}

TEST_CASE("harmonic mean on rational inputs") {
    CHECK(harmonic_mean({2.0, 2.0, 3.0}) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(harmonic_mean({4.0, 4.0}) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(harmonic_mean({2.2, 2.5, 2.8}) ==
          doctest::Approx(770.0 / 311.0).epsilon(1e-14));
}

TEST_CASE("harmonic mean lies between min and max, equal only for constant vectors") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 1 + static_cast<int>(rng.next_below(5));
        std::vector<double> p;
        for (int i = 0; i < N; ++i) p.push_back(rng.next_in(1.1, 8.0));
        const double hm = harmonic_mean(p);
        const double lo = *std::min_element(p.begin(), p.end());
        const double hi = *std::max_element(p.begin(), p.end());
        CHECK(hm >= lo * (1.0 - 1e-12));
        CHECK(hm <= hi * (1.0 + 1e-12));
    }
    // strictness on a genuinely anisotropic vector
    const double hm = harmonic_mean({2.0, 4.0});
    CHECK(hm > 2.0);
    CHECK(hm < 4.0);
    CHECK(hm == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("Sobolev conjugate") {
    CHECK(sobolev_conjugate(2.25, 3) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(sobolev_conjugate(2.5, 3) == doctest::Approx(15.0).epsilon(1e-14));
    CHECK_THROWS_AS(sobolev_conjugate(3.0, 3), profile_error);
    CHECK_THROWS_AS(sobolev_conjugate(3.5, 3), profile_error);
    CHECK_THROWS_AS(sobolev_conjugate(0.0, 3), profile_error);
}

TEST_CASE("derived exponents") {
    SUBCASE("isotropic p = 2.5 in 3-D") {
        const DerivedExponents d = derive(profile({2.5, 2.5, 2.5}));
        CHECK(d.pbar == doctest::Approx(2.5).epsilon(1e-14));
        CHECK(d.lambda == doctest::Approx(4.0).epsilon(1e-14));
        REQUIRE(d.pbar_star.has_value());
        CHECK(*d.pbar_star == doctest::Approx(15.0).epsilon(1e-14));
        CHECK(d.lambda_q(1.0) == doctest::Approx(d.lambda).epsilon(1e-14));
        CHECK(d.lambda_q(2.0) == doctest::Approx(6.5).epsilon(1e-14));
        CHECK(d.pbar_sigma(2.0) == doctest::Approx(2.5 * 5.0 / 3.0).epsilon(1e-14));
    }
    SUBCASE("pbar_star exists only below the dimension") {
        CHECK_FALSE(derive(profile({4.0, 4.0, 4.0})).pbar_star.has_value());
        CHECK(derive(profile({2.9, 2.9, 2.9})).pbar_star.has_value());
    }
    SUBCASE("mixed reference profile") {
        const DerivedExponents d = derive(profile({2.2, 2.5, 2.8}));
        CHECK(d.pbar == doctest::Approx(2.4758842443729905).epsilon(1e-14));
        CHECK(d.lambda == doctest::Approx(3.9035369774919615).epsilon(1e-14));
    }
}

TEST_CASE("directional support exponents") {
    SUBCASE("isotropic collapse to the one-exponent law") {
        // N = 1, p = 3: exponent 1/(N(p-2)+p) = 1/4 on both the time side
        // and (p-2)/lambda = 1/4 on the mass side.
        const SupportExponents e = support_radius_exponents(profile({3.0}), 0);
        CHECK(e.t_exponent == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(e.mass_exponent == doctest::Approx(0.25).epsilon(1e-14));
        const SupportExponents e3 = support_radius_exponents(profile({2.5, 2.5, 2.5}), 1);
        CHECK(e3.t_exponent == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(e3.mass_exponent == doctest::Approx(0.125).epsilon(1e-14));
    }
    SUBCASE("reference anisotropic profile") {
        const AnisotropyProfile pr = profile({2.2, 2.5, 2.8});
        const double t_exp[3] = {0.3846787479406919, 0.24629324546952225,
                                 0.13756177924217464};
        const double m_exp[3] = {0.057660626029654036, 0.12685337726523888,
                                 0.1812191103789127};
        for (int j = 0; j < 3; ++j) {
            const SupportExponents e = support_radius_exponents(pr, j);
            CHECK(e.t_exponent == doctest::Approx(t_exp[j]).epsilon(1e-13));
            CHECK(e.mass_exponent == doctest::Approx(m_exp[j]).epsilon(1e-13));
        }
    }
    SUBCASE("slower directions spread later: t-exponent decreasing in p_j") {
        const AnisotropyProfile pr = profile({2.1, 2.6, 3.4, 5.0});
        double prev = support_radius_exponents(pr, 0).t_exponent;
        for (int j = 1; j < 4; ++j) {
            const double cur = support_radius_exponents(pr, j).t_exponent;
            CHECK(cur < prev);
            prev = cur;
        }
    }
    SUBCASE("t-exponent vanishes at the spreading threshold") {
        // For p = (2.5, 2.5, x) the axis-3 exponent hits zero at x = 3.75,
        // where x = pbar(1 + 1/N) self-consistently.
        double prev = 1.0;
        for (double x : {2.6, 2.9, 3.2, 3.5, 3.7, 3.74}) {
            const double cur =
                support_radius_exponents(profile({2.5, 2.5, x}), 2).t_exponent;
            CHECK(cur < prev);
            prev = cur;
        }
        const double at_threshold =
            support_radius_exponents(profile({2.5, 2.5, 3.75}), 2).t_exponent;
        CHECK(std::abs(at_threshold) < 1e-14);
    }
    SUBCASE("contract violations") {
        CHECK_THROWS_AS(support_radius_exponents(profile({3.0}), 1), contract_error);
        CHECK_THROWS_AS(support_radius_exponents(profile({2.0, 3.0}), 0), contract_error);
        // lambda < 0: many fast axes drag pbar far below 2
        CHECK_THROWS_AS(
            support_radius_exponents(profile({1.05, 1.05, 1.05, 1.05, 3.0}), 4),
            contract_error);
    }
}

TEST_CASE("exponent-sum identities on all-slow profiles") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int N = 1 + static_cast<int>(rng.next_below(4));
        std::vector<double> p;
        for (int i = 0; i < N; ++i) p.push_back(rng.next_in(2.05, 6.0));
        const AnisotropyProfile pr = profile(p);
        const DerivedExponents d = derive(pr);
        const SupportExponents vol = support_measure_exponents(pr);
        double t_sum = 0.0, m_sum = 0.0;
        for (int j = 0; j < N; ++j) {
            const SupportExponents e = support_radius_exponents(pr, j);
            t_sum += e.t_exponent;
            m_sum += e.mass_exponent;
        }
        CHECK(std::abs(t_sum - d.N / d.lambda) <= 1e-12);
        CHECK(std::abs(m_sum - d.N * (d.pbar - 2.0) / d.lambda) <= 1e-12);
        CHECK(std::abs(vol.t_exponent - t_sum) <= 1e-12);
        CHECK(std::abs(vol.mass_exponent - m_sum) <= 1e-12);
    }
}

TEST_CASE("predicted bounds evaluate the stated laws") {
    const AnisotropyProfile pr = profile({2.5, 2.5, 2.5});
    SUBCASE("support radius") {
        const SupportExponents e = support_radius_exponents(pr, 0);
        const double v = predicted_support_radius(pr, 0, 0.3, 2.0, 0.1, 1.7);
        CHECK(v == doctest::Approx(0.2 + 1.7 * std::pow(0.3, e.t_exponent) *
                                             std::pow(2.0, e.mass_exponent))
                       .epsilon(1e-14));
        CHECK(predicted_support_radius(pr, 0, 0.0, 2.0, 0.1) ==
              doctest::Approx(0.2).epsilon(1e-14));
        CHECK_THROWS_AS(predicted_support_radius(pr, 0, -1.0, 2.0, 0.1), contract_error);
        CHECK_THROWS_AS(predicted_support_radius(pr, 0, 1.0, 0.0, 0.1), contract_error);
    }
    SUBCASE("sup-norm decay") {
        const DerivedExponents d = derive(pr);
        const double v = predicted_linf_bound(pr, 0.5, 3.0, 2.0);
        CHECK(v == doctest::Approx(2.0 * std::pow(0.5, -d.N / d.lambda) *
                                   std::pow(3.0, d.pbar / d.lambda))
                       .epsilon(1e-14));
        CHECK_THROWS_AS(predicted_linf_bound(pr, 0.0, 3.0), contract_error);
        // decay regime needs pbar(1 + 1/N) > 2
        CHECK_THROWS_AS(predicted_linf_bound(profile({1.2, 1.2, 1.2}), 1.0, 1.0),
                        contract_error);
    }
}

TEST_CASE("integrability cascade recursion") {
    SUBCASE("cascade reaches the top exponent") {
        const RecursionResult r = embedding_recursion({2.0, 2.0, 3.0}, 2.0);
        CHECK(r.verdict);
        CHECK(r.steps == 1);
        REQUIRE(r.q.size() == 1);
        CHECK(r.q[0] == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
        REQUIRE(r.cascade.size() == 3);
        CHECK(r.cascade[0] == doctest::Approx(6.0).epsilon(1e-14));
        CHECK(r.cascade[1] == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(r.cascade[2] == doctest::Approx(3.75).epsilon(1e-14));
    }
    SUBCASE("cascade stalls at a fixed point below the top exponent") {
        const RecursionResult r = embedding_recursion({1.5, 2.0, 4.0}, 2.0);
        CHECK_FALSE(r.verdict);
        CHECK(std::abs(r.limit - 24.0 / 7.0) <= 1e-12);
        // the stall value is one of the cascade fixed points
        CHECK(std::abs(r.limit - r.cascade[1]) <= 1e-12);
        CHECK(r.limit <= 4.0);
    }
    SUBCASE("q is nondecreasing along every run") {
        SplitMix64 rng(23);
        for (int trial = 0; trial < 50; ++trial) {
            const int N = 2 + static_cast<int>(rng.next_below(3));
            std::vector<double> p;
            for (int i = 0; i < N; ++i) p.push_back(rng.next_in(1.2, 3.5));
            std::sort(p.begin(), p.end());
            if (!(harmonic_mean(p) < N)) continue;
            const double pstar = sobolev_conjugate(harmonic_mean(p), N);
            const double sigma = std::min(2.0, pstar);
            const RecursionResult r = embedding_recursion(p, sigma);
            for (std::size_t k = 1; k < r.q.size(); ++k)
                CHECK(r.q[k] >= r.q[k - 1] * (1.0 - 1e-14));
        }
    }
    SUBCASE("contract violations") {
        CHECK_THROWS_AS(embedding_recursion({3.0, 2.0}, 1.0), contract_error);
        CHECK_THROWS_AS(embedding_recursion({4.0, 4.0, 4.0}, 1.0), contract_error);
        CHECK_THROWS_AS(embedding_recursion({2.0, 2.0, 3.0}, 0.5), contract_error);
        CHECK_THROWS_AS(embedding_recursion({2.0, 2.0, 3.0}, 100.0), contract_error);
    }
}

TEST_CASE("feasibility report") {
    SUBCASE("borderline profile (2, 2, 3)") {
        const FeasibilityReport r = feasibility(profile({2.0, 2.0, 3.0}));
        CHECK(r.pbar_lt_N);
        CHECK(r.slow_directions == std::vector<int>{3});
        CHECK_FALSE(r.condp2_ok); // p_max = 3 equals pbar(1+1/3), not below it
        CHECK(r.boundedness_ok);  // 3 < 3.75
        CHECK(r.pbar1_gt_2);
        CHECK(r.pbar2_gt_2);
    }
    SUBCASE("fast 2-D profile") {
        const FeasibilityReport r = feasibility(profile({1.4, 2.5}));
        CHECK(r.condp2_ok);
        CHECK(r.slow_directions == std::vector<int>{2});
    }
    SUBCASE("very fast profile has no boundedness guarantee") {
        // pbar(1+2/N) = 2 exactly, so max{2, p_max} < pbar(1+2/N) fails even
        // though pbar > 2N/(N+2).
        const FeasibilityReport r = feasibility(profile({1.2, 1.2, 1.2}));
        CHECK_FALSE(r.boundedness_ok);
        CHECK(r.slow_directions.empty());
    }
    SUBCASE("comfortably slow profile") {
        const FeasibilityReport r = feasibility(profile({2.2, 2.3, 2.4}));
        CHECK(r.condp2_ok);
        CHECK(r.boundedness_ok);
        CHECK(r.slow_directions == std::vector<int>{1, 2, 3});
    }
}
