#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccl/iteration.hpp"
#include "ccl/model.hpp"

using namespace ccl;

namespace {

Barrier verified_constant(const RadialModel& model, const RadialProfile& S, const Grid& g,
                          double level) {
    Barrier b{GridFunction::constant(g, level), BarrierKind::ConstantBump, level,
              std::nullopt, std::nullopt, false};
    REQUIRE(verify_lower_solution(model, b, S));
    return b;
}

} // namespace

TEST_CASE("monotone solve on the constant-curvature problem") {
    // s == S == -1 on the hyperbolic plane: u == 0 solves the equation
    RadialModel m = make_hyperbolic_model(1, 16.0, -1.0);
    auto S = [](double) { return -1.0; };
    Grid g(16.0, 2048);
    Barrier lower = verified_constant(m, S, g, -1.0);

    MonotoneOptions opt;
    opt.tol = 1e-8;
    Solution sol = monotone_solve(m, S, g, lower, opt);

    SECTION("interior values collapse to the exact solution") {
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.node(i) <= 1.0)
                REQUIRE(std::abs(sol.u[i]) < 1e-3);
    }
    SECTION("monotone descent between the barriers") {
        REQUIRE(sol.monotone_slack <= 1e-12);
        REQUIRE(sol.lower_slack <= 1e-12);
        REQUIRE(sol.bound_lower <= 1e-8);
        REQUIRE(sol.bound_upper <= 1e-12);
        REQUIRE(sol.b_k == Catch::Approx(0.5 * std::log(2.0) + 1.0));
    }
    SECTION("trace decreases after the first entry") {
        for (std::size_t j = 2; j < sol.trace.size(); ++j)
            REQUIRE(sol.trace[j] <= sol.trace[j - 1] + 1e-12);
        REQUIRE(sol.residual_sup < 10.0 * opt.tol);
    }
}

TEST_CASE("monotone solve control failures") {
    RadialModel m = make_hyperbolic_model(1, 8.0, -1.0);
    auto S = [](double) { return -1.0; };
    Grid g(8.0, 256);
    Barrier lower = verified_constant(m, S, g, -1.0);
    SECTION("max_iter = 0") {
        MonotoneOptions opt;
        opt.max_iter = 0;
        REQUIRE_THROWS_AS(monotone_solve(m, S, g, lower, opt), convergence_error);
    }
    SECTION("max_iter too small carries the trace") {
        MonotoneOptions opt;
        opt.max_iter = 3;
        opt.tol = 1e-12;
        try {
            monotone_solve(m, S, g, lower, opt);
            FAIL("expected convergence_error");
        } catch (const convergence_error& e) {
            REQUIRE(e.trace().size() == 3);
        }
    }
    SECTION("unverified barrier is rejected") {
        Barrier raw{GridFunction::constant(g, -1.0), BarrierKind::ConstantBump,
                    -1.0, std::nullopt, std::nullopt, false};
        REQUIRE_THROWS_AS(monotone_solve(m, S, g, raw, MonotoneOptions{}), invalid_barrier_error);
    }
}

TEST_CASE("exhaustion over nested balls") {
    RadialModel m = make_hyperbolic_model(1, 16.0, -1.0);
    auto S = [](double) { return -1.0; };
    Grid full(16.0, 1024);
    Barrier lower = verified_constant(m, S, full, -1.0);

    SECTION("duplicated radii give a zero trace") {
        ExhaustionOptions opt;
        opt.n_cells = 512;
        auto ex = exhaustion_solve(m, S, {8.0, 8.0}, lower, opt);
        REQUIRE(ex.compact_trace.size() == 1);
        REQUIRE(ex.compact_trace[0] == 0.0);
    }
    SECTION("boundary influence decays through the family") {
        ExhaustionOptions opt;
        opt.n_cells = 1024;
        auto ex = exhaustion_solve(m, S, {4.0, 8.0, 12.0, 16.0}, lower, opt);
        REQUIRE(ex.compact_trace.size() == 3);
        for (std::size_t k = 1; k < ex.compact_trace.size(); ++k)
            REQUIRE(ex.compact_trace[k] < ex.compact_trace[k - 1]);
        // layer decays like e^{-dist}: |u_16 - u_12| on r <= 4 sits near 2.4e-4
        REQUIRE(ex.compact_trace.back() < 1e-3);
        REQUIRE(ex.trace_nonincreasing);
        REQUIRE(ex.final_below_tol);
        // uniform local bound across the family
        REQUIRE(ex.c_loc < 1.5);
    }
    SECTION("a deeper exhaustion stabilizes below 1e-4") {
        RadialModel wide = make_hyperbolic_model(1, 20.0, -1.0);
        Grid g20(20.0, 1280);
        Barrier lw = verified_constant(wide, S, g20, -1.0);
        ExhaustionOptions opt;
        opt.n_cells = 1280;
        opt.compact_tol = 1e-4;
        auto ex = exhaustion_solve(wide, S, {4.0, 8.0, 12.0, 16.0, 20.0}, lw, opt);
        REQUIRE(ex.compact_trace.back() < 1e-4);
        REQUIRE(ex.final_below_tol);
    }
    SECTION("input validation") {
        REQUIRE_THROWS_AS(exhaustion_solve(m, S, {8.0}, lower, ExhaustionOptions{}),
                          invalid_parameter_error);
        REQUIRE_THROWS_AS(exhaustion_solve(m, S, {8.0, 4.0}, lower, ExhaustionOptions{}),
                          invalid_parameter_error);
        REQUIRE_THROWS_AS(exhaustion_solve(m, S, {8.0, 32.0}, lower, ExhaustionOptions{}),
                          invalid_parameter_error);
    }
}

TEST_CASE("local bound report") {
    Grid g(8.0, 256);
    SECTION("constant family has a flat trend") {
        std::vector<GridFunction> fam{GridFunction::constant(g, -1.0),
                                      GridFunction::constant(g, -1.0),
                                      GridFunction::constant(g, -1.0)};
        auto rep = local_bound_report(fam, 2.0);
        REQUIRE(rep.sup_max == Catch::Approx(1.0));
        REQUIRE(rep.trend_slope == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(rep.bounded);
    }
    SECTION("single solution is trivially bounded") {
        std::vector<GridFunction> fam{GridFunction::sample(g, [](double r) { return std::sin(r); })};
        auto rep = local_bound_report(fam, 2.0);
        REQUIRE(rep.ratios.size() == 1);
        REQUIRE(rep.bounded);
    }
    SECTION("exhaustion family stays bounded") {
        RadialModel m = make_hyperbolic_model(1, 16.0, -1.0);
        auto S = [](double) { return -1.0; };
        Grid full(16.0, 512);
        Barrier lower = verified_constant(m, S, full, -1.0);
        ExhaustionOptions opt;
        opt.n_cells = 512;
        auto ex = exhaustion_solve(m, S, {4.0, 8.0, 12.0, 16.0}, lower, opt);
        std::vector<GridFunction> fam;
        for (const auto& s : ex.ball_solutions) fam.push_back(s.u);
        auto rep = local_bound_report(fam, 4.0);
        REQUIRE(rep.bounded);
    }
}
