#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "ccl/config.hpp"

using namespace ccl;

namespace {
nlohmann::json minimal_config() {
    return nlohmann::json::parse(R"({
        "model": {"preset": "hyperbolic", "n": 1, "r_max": 16.0, "s_constant": -1.0},
        "hypotheses": {"C1": 4.0, "C2": 0.0, "alpha": 0.0, "b": 1.0, "l": 0.0, "c": 1.0, "k": 0.0},
        "target_S": {"value": -1.0}
    })");
}
}  // namespace

TEST_CASE("config defaults and presets") {
    auto cfg = parse_config(minimal_config());
    REQUIRE(cfg.grid_n == 2048);
    REQUIRE(cfg.radii == std::vector<double>{4.0, 8.0, 12.0, 16.0});
    REQUIRE(cfg.tol == 1e-8);
    REQUIRE(cfg.hypotheses.n == 1);
    REQUIRE(cfg.hypotheses.beta == 0.0);

    auto model = cfg.make_model();
    REQUIRE(model.name == "hyperbolic");
    REQUIRE(model.s_profile(3.0) == -1.0);
    auto S = cfg.make_target();
    REQUIRE(S(2.0) == -1.0);
}

TEST_CASE("config rejects malformed documents with field diagnostics") {
    SECTION("missing hypotheses") {
        auto j = minimal_config();
        j.erase("hypotheses");
        try {
            parse_config(j);
            FAIL("expected config_error");
        } catch (const config_error& e) {
            REQUIRE(e.field() == "hypotheses");
        }
    }
    SECTION("bad exponent") {
        auto j = minimal_config();
        j["hypotheses"]["alpha"] = -1.0;
        REQUIRE_THROWS_AS(parse_config(j), config_error);
    }
    SECTION("radii outside the model") {
        auto j = minimal_config();
        j["grid"] = {{"N", 256}, {"radii", {4.0, 32.0}}};
        REQUIRE_THROWS_AS(parse_config(j), config_error);
    }
    SECTION("unknown preset") {
        auto j = minimal_config();
        j["model"]["preset"] = "torus";
        REQUIRE_THROWS_AS(parse_config(j).make_model(), config_error);
    }
    SECTION("missing file") {
        REQUIRE_THROWS_AS(load_config("/nonexistent/nope.json"), config_error);
    }
}

TEST_CASE("tabulated profiles interpolate linearly and clamp") {
    TabulatedProfile p({{0.0, 0.0}, {1.0, -1.0}, {2.0, -1.0}});
    REQUIRE(p(0.5) == Catch::Approx(-0.5));
    REQUIRE(p(1.5) == Catch::Approx(-1.0));
    REQUIRE(p(-1.0) == 0.0);
    REQUIRE(p(10.0) == -1.0);
    REQUIRE_THROWS_AS(TabulatedProfile({{0.0, 1.0}}), invalid_parameter_error);
    REQUIRE_THROWS_AS(TabulatedProfile({{0.0, 1.0}, {0.0, 2.0}}), invalid_parameter_error);
}

TEST_CASE("custom model from tables") {
    auto j = minimal_config();
    j["model"] = {{"preset", "custom"},
                  {"n", 1},
                  {"r_max", 8.0},
                  {"drift_table", {{0.1, 10.0}, {8.0, 0.125}}},
                  {"s_table", {{0.0, -1.0}, {8.0, -1.0}}}};
    auto cfg = parse_config(j);
    auto model = cfg.make_model();
    REQUIRE(model.name == "custom");
    REQUIRE(model.s_profile(4.0) == -1.0);
    REQUIRE(model.drift(0.1) == Catch::Approx(10.0));
    REQUIRE_FALSE(model.pole_regular);
}
