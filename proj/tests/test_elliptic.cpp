#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccl/elliptic.hpp"
#include "ccl/model.hpp"
#include "test_support.hpp"

using namespace ccl;

TEST_CASE("tridiagonal solver handles a hand system and the pivot fallback") {
    SECTION("diagonally dominant") {
        // [2 1 0; 1 3 1; 0 1 2] x = [4; 10; 8] -> x = (1, 2, 3)
        std::vector<double> lo{0, 1, 1}, di{2, 3, 2}, up{1, 1, 0}, rhs{4, 10, 8};
        auto x = solve_tridiagonal(lo, di, up, rhs);
        REQUIRE(x[0] == Catch::Approx(1.0));
        REQUIRE(x[1] == Catch::Approx(2.0));
        REQUIRE(x[2] == Catch::Approx(3.0));
    }
    SECTION("vanishing Thomas pivot, nonsingular matrix") {
        // [1 1 0; 1 1 1; 0 1 1]: elimination kills the second pivot
        std::vector<double> lo{0, 1, 1}, di{1, 1, 1}, up{1, 1, 0};
        std::vector<double> x_true{1.0, -2.0, 3.0};
        std::vector<double> rhs{x_true[0] + x_true[1], x_true[0] + x_true[1] + x_true[2],
                                x_true[1] + x_true[2]};
        auto x = solve_tridiagonal(lo, di, up, rhs);
        for (int i = 0; i < 3; ++i) REQUIRE(x[i] == Catch::Approx(x_true[i]).margin(1e-12));
    }
    SECTION("singular matrix") {
        std::vector<double> lo{0, 1}, di{1, 1}, up{1, 0}, rhs{1, 2};
        REQUIRE_THROWS_AS(solve_tridiagonal(lo, di, up, rhs), singular_system_error);
    }
}

TEST_CASE("constants solve (-L + 1) u = 1 with boundary 1") {
    RadialModel m = make_hyperbolic_model(1, 8.0);
    Grid g(8.0, 128);
    auto u = solve_linear(LinearRadialProblem(m, 1.0, GridFunction::constant(g, 1.0), 8.0, 1.0));
    for (std::size_t i = 0; i < g.size(); ++i)
        REQUIRE(u[i] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("flat radial Poisson closed form") {
    // euclidean n=1: L(1 - r^2) = -4, so (-L) u = 4 with zero trace at the
    // boundary node reproduces u = r_b^2 - r^2 shifted to vanish there
    RadialModel m = make_euclidean_model(1, 1.0, 0.0);
    Grid g(1.0, 2048);
    const double rb = g.node(g.size() - 1);
    auto u = solve_linear(LinearRadialProblem(m, 0.0, GridFunction::constant(g, 4.0), 1.0, 0.0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        REQUIRE(u[i] == Catch::Approx(rb * rb - r * r).margin(2e-6));
    }
}

TEST_CASE("manufactured solution converges at second order") {
    RadialModel m = make_hyperbolic_model(1, 4.0);
    const double c = 1.0;
    auto u_star = [](double r) { return std::cos(r); };
    auto f = [&](double r) {
        const double lap = -std::cos(r) + m.drift(r) * (-std::sin(r));
        return -lap + c * std::cos(r);
    };
    auto sup_error = [&](std::size_t N) {
        Grid g(4.0, N);
        auto u = solve_linear(LinearRadialProblem(m, c, GridFunction::sample(g, f), 4.0,
                                                  u_star(g.node(N - 1))));
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            e = std::max(e, std::abs(u[i] - u_star(g.node(i))));
        return e;
    };
    const double e1 = sup_error(512), e2 = sup_error(1024), e3 = sup_error(2048);
    REQUIRE(e1 / e2 > 3.5);
    REQUIRE(e1 / e2 < 4.5);
    REQUIRE(e2 / e3 > 3.5);
    REQUIRE(e2 / e3 < 4.5);
}

TEST_CASE("discrete maximum principle under random nonnegative data") {
    RadialModel m = make_hyperbolic_model(1, 8.0);
    Grid g(8.0, 128);
    auto rng = make_rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> f(g.size());
        for (auto& x : f) x = 10.0 * U(rng);
        const double c = 0.1 + 5.0 * U(rng);
        const double boundary = 2.0 * U(rng);
        auto u = solve_linear(LinearRadialProblem(m, c, GridFunction(g, f), 8.0, boundary));
        for (std::size_t i = 0; i < g.size(); ++i)
            REQUIRE(u[i] >= -1e-12);
    }
}

TEST_CASE("solution comparison under ordered right sides") {
    RadialModel m = make_hyperbolic_model(1, 8.0);
    Grid g(8.0, 128);
    auto rng = make_rng(13);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> f1(g.size()), f2(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            f1[i] = U(rng);
            f2[i] = f1[i] + 0.5 * (U(rng) + 1.0);  // f2 >= f1
        }
        const double c = 0.5, boundary = U(rng);
        auto u1 = solve_linear(LinearRadialProblem(m, c, GridFunction(g, f1), 8.0, boundary));
        auto u2 = solve_linear(LinearRadialProblem(m, c, GridFunction(g, f2), 8.0, boundary));
        for (std::size_t i = 0; i < g.size(); ++i)
            REQUIRE(u1[i] <= u2[i] + 1e-12);
    }
}

TEST_CASE("solve_linear input validation") {
    RadialModel m = make_hyperbolic_model(1, 8.0);
    Grid coarse(8.0, 8);
    REQUIRE_THROWS_AS(
        solve_linear(LinearRadialProblem(m, 1.0, GridFunction::constant(coarse, 1.0), 8.0, 0.0)),
        invalid_parameter_error);
    Grid g(8.0, 32);
    REQUIRE_THROWS_AS(LinearRadialProblem(m, -1.0, GridFunction::constant(g, 1.0), 8.0, 0.0),
                      invalid_parameter_error);
    REQUIRE_THROWS_AS(LinearRadialProblem(m, 1.0, GridFunction::constant(g, 1.0), 12.0, 0.0),
                      domain_mismatch_error);
}

TEST_CASE("nonlinear residual closed forms") {
    RadialModel m = make_hyperbolic_model(1, 8.0, -1.0);
    Grid g(8.0, 256);
    SECTION("u = 0 with s == S is an exact solution") {
        auto res = nonlinear_residual(m, GridFunction::constant(g, 0.0), [](double) { return -1.0; });
        REQUIRE(res.sup_norm() == 0.0);
    }
    SECTION("constant u against constant profiles") {
        const double a = 0.8;
        auto res = nonlinear_residual(m, GridFunction::constant(g, a), [](double) { return -1.0; });
        const double expect = -1.0 + std::exp(2.0 * a);
        for (std::size_t i = 0; i < g.size(); ++i)
            REQUIRE(res[i] == Catch::Approx(expect).epsilon(1e-13));
    }
}
