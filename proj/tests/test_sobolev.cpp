// Embedding parameter derivation, node grids, both sides of the stationary
// and space-time inequalities, and the randomized constant estimator.
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "aniso/errors.hpp"
#include "aniso/rng.hpp"
#include "aniso/sobolev.hpp"

using namespace aniso;

namespace {

NodeField scaled(const NodeField& f, double c) {
    NodeField g = f;
    for (double& v : g.values) v *= c;
    return g;
}

double ratio_of(std::pair<double, double> sides) {
    return sides.first / sides.second;
}

} // namespace

TEST_CASE("embedding parameters derive the conjugate family consistently") {
    const SobolevParams P = make_sobolev_params({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0});
    CHECK(P.N == 3);
    CHECK(P.pbar == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(P.pbar_star == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(P.alpha_tilde == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(P.p_star_alpha == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(P.sigma == 1.0);
    CHECK(P.theta == 0.0);
    CHECK(P.q == doctest::Approx(1.0).epsilon(1e-15)); // theta = 0 collapses q to sigma

    const SobolevParams Q =
        make_sobolev_params({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}, 2.0, 1.0 / 3.0);
    CHECK(Q.q == doctest::Approx(10.0 / 3.0).epsilon(1e-14));

    // Unequal weights change alpha_tilde and the admissible ranges.
    const SobolevParams W =
        make_sobolev_params({2.0, 2.0, 2.0}, {1.2, 1.0, 0.8});
    CHECK(W.alpha_tilde == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(W.p_star_alpha == doctest::Approx(6.0).epsilon(1e-14));

    SUBCASE("validation") {
        CHECK_THROWS_AS(make_sobolev_params({3.0, 3.0, 3.0}, {1.0, 1.0, 1.0}),
                        contract_error); // pbar = N: no embedding
        CHECK_THROWS_AS(make_sobolev_params({2.0, 2.0}, {1.0, 1.0, 1.0}),
                        contract_error);
        CHECK_THROWS_AS(make_sobolev_params({2.0, 2.0, 2.0}, {1.0, -1.0, 1.0}),
                        contract_error);
        CHECK_THROWS_AS(make_sobolev_params({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}, 0.5),
                        contract_error); // sigma below 1
        CHECK_THROWS_AS(make_sobolev_params({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}, 7.0),
                        contract_error); // sigma above p_star_alpha
        CHECK_THROWS_AS(
            make_sobolev_params({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}, 1.0, -0.1),
            contract_error);
        CHECK_THROWS_AS(
            make_sobolev_params({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}, 1.0, 0.4),
            contract_error); // theta above pbar/pbar_star = 1/3
    }
}

TEST_CASE("node grids cover the unit box with boundary nodes") {
    const NodeGrid g = make_node_grid({5, 9});
    CHECK(g.N == 2);
    CHECK(g.total == 45);
    CHECK(g.spacing[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.spacing[1] == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(g.strides[0] == 9);
    CHECK(g.strides[1] == 1);

    CHECK_THROWS_AS(make_node_grid({}), config_error);
    CHECK_THROWS_AS(make_node_grid({2, 5}), config_error);
}

TEST_CASE("stationary sides vanish together and form a scale-invariant ratio") {
    const NodeGrid grid = make_node_grid({17, 17, 17});
    const SobolevParams P = make_sobolev_params({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0});

    NodeField zero;
    zero.grid = grid;
    zero.values.assign(static_cast<std::size_t>(grid.total), 0.0);
    const auto z = elliptic_sides(zero, P);
    CHECK(z.first == 0.0);
    CHECK(z.second == 0.0);

    SplitMix64 rng(7);
    const NodeField u = sample_bump_field(rng, grid);
    const double r1 = ratio_of(elliptic_sides(u, P));
    const double r2 = ratio_of(elliptic_sides(scaled(u, 3.7), P));
    CHECK(r1 > 0.0);
    CHECK(std::abs(r1 - r2) <= 1e-12 * r1);

    // Scale invariance also holds for unequal weights.
    const SobolevParams W = make_sobolev_params({2.0, 2.0, 2.0}, {1.2, 1.0, 0.8});
    const double w1 = ratio_of(elliptic_sides(u, W));
    const double w2 = ratio_of(elliptic_sides(scaled(u, 0.013), W));
    CHECK(std::abs(w1 - w2) <= 1e-12 * w1);

    SUBCASE("boundary violations and dimension mismatches are rejected") {
        NodeField ones = zero;
        ones.values.assign(ones.values.size(), 1.0);
        CHECK_THROWS_AS(elliptic_sides(ones, P), contract_error);

        NodeField flat;
        flat.grid = make_node_grid({9, 9});
        flat.values.assign(81, 0.0);
        CHECK_THROWS_AS(elliptic_sides(flat, P), contract_error);
    }
}

TEST_CASE("random admissible fields never violate the stationary inequality") {
    const NodeGrid grid = make_node_grid({17, 17});
    const SobolevParams P = make_sobolev_params({1.8, 1.8}, {1.0, 1.0});
    const ConstantEstimate est = estimate_constant(99, 200, P, grid);
    CHECK(est.violations == 0);
    CHECK(est.ratios.size() == 200);
    CHECK(est.max_ratio > 0.0);
    CHECK(est.max_ratio == *std::max_element(est.ratios.begin(), est.ratios.end()));

    SUBCASE("per-trial seeding makes larger samples extend smaller ones") {
        const ConstantEstimate head = estimate_constant(99, 50, P, grid);
        REQUIRE(head.ratios.size() == 50);
        for (std::size_t k = 0; k < 50; ++k) CHECK(head.ratios[k] == est.ratios[k]);
        CHECK(head.max_ratio <= est.max_ratio);
    }

    CHECK_THROWS_AS(estimate_constant(99, 0, P, grid), contract_error);
}

TEST_CASE("space-time sides respect the designed horizon scaling") {
    const NodeGrid grid = make_node_grid({17, 17});
    SplitMix64 rng(31);
    const NodeField u = sample_bump_field(rng, grid);

    SUBCASE("theta = 0 collapses to the sup-slice bound with ratio one") {
        const SobolevParams P = make_sobolev_params({1.8, 1.8}, {1.0, 1.0}, 2.0, 0.0);
        const std::vector<NodeField> slices(6, u);
        const auto sides = parabolic_sides(slices, 0.7, P);
        CHECK(ratio_of(sides) == doctest::Approx(1.0).epsilon(1e-13));
    }

    SUBCASE("time-constant slices give a horizon-independent ratio") {
        const SobolevParams P = make_sobolev_params({1.8, 1.8}, {1.0, 1.0}, 2.0, 0.05);
        const std::vector<NodeField> slices(4, u);
        const double rA = ratio_of(parabolic_sides(slices, 0.5, P));
        const double rB = ratio_of(parabolic_sides(slices, 2.0, P));
        CHECK(rA > 0.0);
        CHECK(std::abs(rA - rB) <= 1e-12 * rA);
    }

    SUBCASE("validation") {
        const SobolevParams P = make_sobolev_params({1.8, 1.8}, {1.0, 1.0}, 2.0, 0.05);
        CHECK_THROWS_AS(parabolic_sides({}, 1.0, P), contract_error);
        const std::vector<NodeField> slices(2, u);
        CHECK_THROWS_AS(parabolic_sides(slices, 0.0, P), contract_error);
        NodeField flat;
        flat.grid = make_node_grid({9, 9, 9});
        flat.values.assign(729, 0.0);
        CHECK_THROWS_AS(parabolic_sides({flat}, 1.0, P), contract_error);
    }
}

TEST_CASE("random space-time fields never violate the parabolic inequality") {
    const NodeGrid grid = make_node_grid({17, 17});
    const SobolevParams P = make_sobolev_params({1.8, 1.8}, {1.0, 1.0}, 2.0, 0.05);
    const ConstantEstimate est = estimate_constant_parabolic(7, 20, P, grid, 4, 1.0);
    CHECK(est.violations == 0);
    CHECK(est.ratios.size() == 20);
    CHECK(est.max_ratio > 0.0);

    CHECK_THROWS_AS(estimate_constant_parabolic(7, 0, P, grid, 4, 1.0), contract_error);
    CHECK_THROWS_AS(estimate_constant_parabolic(7, 20, P, grid, 0, 1.0), contract_error);
}
