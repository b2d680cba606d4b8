// Raw key-value parsing and the typed simulation-config layer: defaults,
// broadcasting, and validation messages that name the offending key.
#include <string>

#include "doctest.h"

#include "aniso/config.hpp"
#include "aniso/errors.hpp"

using namespace aniso;

namespace {

// Minimal complete config; tests splice overrides and extra lines into it.
std::string minimal_config(const std::string& extra = "") {
    return "[flux]\n"
           "p = 2.2, 2.8\n"
           "[grid]\n"
           "cells = 32\n"
           "half_widths = 1.0\n"
           "[initial]\n"
           "radius = 0.1\n"
           "amplitude = 1.0\n"
           "[run]\n"
           "horizon = 0.01\n" +
           extra;
}

} // namespace

TEST_CASE("raw parsing handles sections, comments, and duplicate overrides") {
    const RawConfig raw = parse_config_text("# leading comment\n"
                                            "[alpha]\n"
                                            "  key = 1  # trailing comment\n"
                                            "other=  spaced value \n"
                                            "\n"
                                            "[beta]\n"
                                            "key = first\n"
                                            "key = second\n");
    CHECK(raw.has("alpha", "key"));
    CHECK(raw.get("alpha", "key") == "1");
    CHECK(raw.get("alpha", "other") == "spaced value");
    CHECK(raw.get("beta", "key") == "second"); // later duplicate wins
    CHECK_FALSE(raw.has("alpha", "missing"));
    CHECK_FALSE(raw.has("gamma", "key"));
    CHECK(raw.get_or("gamma", "key", "fb") == "fb");
    CHECK_THROWS_AS(raw.get("gamma", "key"), config_error);
    CHECK_THROWS_AS(raw.get("alpha", "missing"), config_error);

    SUBCASE("malformed lines are reported with their line number") {
        try {
            parse_config_text("[s]\njust some words\n");
            CHECK(false);
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_config_text("key = 1\n"), config_error); // no section
        CHECK_THROWS_AS(parse_config_text("[s]\n= 1\n"), config_error); // empty key
        CHECK_THROWS_AS(parse_config_text("[]\nk = 1\n"), config_error);
        CHECK_THROWS_AS(parse_config_text("[s\nk = 1\n"), config_error);
    }
}

TEST_CASE("list parsing") {
    CHECK(parse_double_list("1.5,2,3e-2") == std::vector<double>{1.5, 2.0, 3e-2});
    CHECK(parse_double_list(" 4 ") == std::vector<double>{4.0});
    CHECK(parse_int_list("4, 8,16") == std::vector<int>{4, 8, 16});
    CHECK_THROWS_AS(parse_double_list(""), config_error);
    CHECK_THROWS_AS(parse_double_list("1,abc"), config_error);
    CHECK_THROWS_AS(parse_int_list("1.5"), config_error);
}

TEST_CASE("the typed layer fills defaults and broadcasts scalars") {
    const SimulationConfig cfg =
        simulation_config_from_raw(parse_config_text(minimal_config()));

    CHECK(cfg.setup.grid.N == 2); // dimension inferred from flux.p
    CHECK(cfg.setup.grid.cells == std::vector<int>{32, 32});
    CHECK(cfg.setup.grid.half_widths == std::vector<double>{1.0, 1.0});
    CHECK(cfg.setup.R0 == std::vector<double>{0.1, 0.1});
    CHECK(cfg.setup.amplitude == 1.0);
    CHECK(cfg.setup.shape == InitialShape::box_bump);
    CHECK(cfg.setup.flux.kind == FluxKind::orthotropic);
    CHECK(cfg.setup.flux.Lambda == 1.0);

    CHECK(cfg.setup.run.horizon == 0.01);
    CHECK(cfg.setup.run.safety == 0.4);
    CHECK(cfg.setup.run.fallback_dt == 1e-6);
    CHECK(cfg.setup.run.cadence == 481);
    CHECK(cfg.setup.run.cadence_first_frac == 1e-4);
    CHECK(cfg.setup.run.epsilon == 0.0);
    CHECK(cfg.setup.run.epsilon_rel == 0.0);
    CHECK(cfg.setup.run.collar_rel == 0.0);
    CHECK(cfg.setup.run.snapshot_every == 0);

    CHECK(cfg.output.dir == "out");
    CHECK(cfg.output.timestamp);
    CHECK_FALSE(cfg.output.svg);
    CHECK(cfg.output.fit_lo_frac == 0.1);
    CHECK(cfg.output.fit_hi_frac == 1.0);
    CHECK(cfg.output.fit_shift_scale == 2.0);
}

TEST_CASE("the typed layer honors explicit per-axis settings") {
    const SimulationConfig cfg = simulation_config_from_raw(parse_config_text(
        minimal_config("cadence = 33\n"
                       "collar_rel = 1e-4\n"
                       "epsilon_rel = 0.01\n"
                       "[output]\n"
                       "dir = results\n"
                       "timestamp = false\n"
                       "svg = true\n"
                       "fit_lo_frac = 0.04\n"
                       "fit_shift_scale = 0\n")));
    CHECK(cfg.output.dir == "results");
    CHECK_FALSE(cfg.output.timestamp);
    CHECK(cfg.output.svg);
    CHECK(cfg.output.fit_lo_frac == 0.04);
    CHECK(cfg.output.fit_shift_scale == 0.0);
    CHECK(cfg.setup.run.cadence == 33);
    CHECK(cfg.setup.run.collar_rel == 1e-4);
    CHECK(cfg.setup.run.epsilon_rel == 0.01);

    const SimulationConfig per_axis = simulation_config_from_raw(parse_config_text(
        "[flux]\np = 2.2, 2.5, 2.8\nkind = perturbed\nlambda = 1.5\nseed = 7\n"
        "[grid]\ncells = 16, 32, 64\nhalf_widths = 1.2, 0.45, 0.24\n"
        "[initial]\nshape = product-bump\nradius = 0.075, 0.04, 0.02\namplitude = 0.07\n"
        "[run]\nhorizon = 0.19\n"));
    CHECK(per_axis.setup.grid.cells == std::vector<int>{16, 32, 64});
    CHECK(per_axis.setup.R0 == std::vector<double>{0.075, 0.04, 0.02});
    CHECK(per_axis.setup.shape == InitialShape::product_bump);
    CHECK(per_axis.setup.flux.kind == FluxKind::perturbed);
    CHECK(per_axis.setup.flux.Lambda == 1.5);
    CHECK(per_axis.setup.flux.seed == 7);
}

TEST_CASE("typed-layer errors name the offending key") {
    auto error_of = [](const std::string& text) {
        try {
            simulation_config_from_raw(parse_config_text(text));
            return std::string();
        } catch (const config_error& e) {
            return std::string(e.what());
        }
    };

    CHECK(error_of("[grid]\ncells = 32\n").find("[flux]") != std::string::npos);
    CHECK(error_of("[flux]\np = 2.5\n[grid]\ncells = 32\nhalf_widths = 1\n"
                   "[initial]\nradius = 0.1\namplitude = 1\n[run]\n")
              .find("horizon") != std::string::npos);
    CHECK(error_of(minimal_config("safety = abc\n")).find("run.safety") !=
          std::string::npos);
    CHECK(error_of(minimal_config("cadence = 2.5\n")).find("run.cadence") !=
          std::string::npos);
    CHECK(error_of(minimal_config("collar_rel = 1\n")).find("collar_rel") !=
          std::string::npos);
    CHECK(error_of(minimal_config("[output]\nfit_lo_frac = 0.9\nfit_hi_frac = 0.5\n"))
              .find("fit_lo_frac") != std::string::npos);
    CHECK(error_of(minimal_config("[output]\nfit_shift_scale = -1\n"))
              .find("fit_shift_scale") != std::string::npos);
    CHECK(error_of(minimal_config("[output]\ntimestamp = maybe\n"))
              .find("timestamp") != std::string::npos);

    // Entry-count mismatches against the flux dimension.
    CHECK(error_of("[flux]\np = 2.2, 2.8\n[grid]\ncells = 32, 32, 32\n"
                   "half_widths = 1\n[initial]\nradius = 0.1\namplitude = 1\n"
                   "[run]\nhorizon = 0.01\n")
              .find("grid.cells") != std::string::npos);

    SUBCASE("unknown sections and keys are rejected") {
        CHECK(error_of(minimal_config("[extras]\nk = 1\n")).find("[extras]") !=
              std::string::npos);
        CHECK(error_of(minimal_config("epsilon_rell = 0.01\n")).find("epsilon_rell") !=
              std::string::npos);
        CHECK(error_of(minimal_config("[output]\ndirectory = out\n"))
                  .find("directory") != std::string::npos);
    }

    SUBCASE("unknown enumerations") {
        CHECK_THROWS_AS(simulation_config_from_raw(parse_config_text(
                            minimal_config("[initial]\nshape = blob\n"))),
                        config_error);
        CHECK_THROWS_AS(simulation_config_from_raw(parse_config_text(
                            minimal_config("[flux]\nkind = isotropic\n"))),
                        config_error);
    }
}

TEST_CASE("config files load through the same path") {
    CHECK_THROWS_AS(load_simulation_config("/nonexistent/path.cfg"), config_error);
}
