#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccl/elliptic.hpp"
#include "ccl/hypotheses.hpp"
#include "ccl/model.hpp"
#include "test_support.hpp"

using namespace ccl;

namespace {
HypothesisSet hyp(double C1, double C2, double alpha, double b, double l, double c, double k,
                  int n) {
    return HypothesisSet{C1, C2, alpha, 0.5 * alpha, b, l, c, k, n};
}
}  // namespace

TEST_CASE("classification of the named examples") {
    SECTION("strict decay dominance") {
        auto rep = classify(hyp(1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1));
        REQUIRE(rep.matched_case == FeasibleCase::Case1);
        REQUIRE(rep.margin < 0.0);
        REQUIRE(rep.scaling_condition == ScalingCondition::Cond1);
    }
    SECTION("critical decay with dominant depth") {
        auto rep = classify(hyp(4.0, 0.0, 2.0, 3.0, 0.0, 1.0, 0.0, 1));
        REQUIRE(rep.C3 == Catch::Approx(1.0));
        REQUIRE(rep.matched_case == FeasibleCase::Case4);
        REQUIRE(rep.margin == Catch::Approx(-9.0 + 4.0));  // -b^2 + 4 n^2 sqrt(C3)
    }
    SECTION("exponent mismatch matches nothing") {
        auto rep = classify(hyp(1.0, 1.0, 2.0, 1.0, 0.5, 1.0, 1.0, 1));
        REQUIRE(rep.matched_case == FeasibleCase::None);
    }
    SECTION("alpha beyond 2 is rejected and recorded") {
        auto rep = classify(hyp(1.0, 1.0, 2.5, 1.0, 0.0, 1.0, 1.0, 1));
        REQUIRE(rep.matched_case == FeasibleCase::None);
        REQUIRE(rep.alpha_out_of_range);
    }
}

TEST_CASE("case3 records the alternative-constant discrepancy") {
    // passes with 4 n^2 sqrt(C3) = 4 but not with 8 n^2 sqrt(C3) = 8
    auto rep = classify(hyp(4.0, 0.0, 2.0, 3.0, 0.0, 1.0, 2.0, 1));
    REQUIRE(rep.matched_case == FeasibleCase::Case3);
    REQUIRE(rep.margin == Catch::Approx(-9.0 + 1.0 + 4.0));
    REQUIRE(rep.case3_margin_8n2);
    REQUIRE(*rep.case3_margin_8n2 == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(rep.case3_constant_discrepancy);

    // comfortably inside both constants: no discrepancy
    auto rep2 = classify(hyp(4.0, 0.0, 0.0, 4.0, 1.0, 1.0, 1.0, 1));
    REQUIRE(rep2.matched_case == FeasibleCase::Case3);
    REQUIRE_FALSE(rep2.case3_constant_discrepancy);
}

TEST_CASE("at most one case matches any parameter draw") {
    auto rng = make_rng(23);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int matched_counts[5] = {0, 0, 0, 0, 0};
    for (int it = 0; it < 100000; ++it) {
        HypothesisSet h;
        h.C1 = 0.1 + 4.0 * U(rng);
        h.C2 = 2.0 * U(rng);
        h.alpha = 2.5 * U(rng);
        h.beta = 0.5 * h.alpha;
        h.b = 0.1 + 4.0 * U(rng);
        h.c = 0.1 + 4.0 * U(rng);
        h.n = 1 + static_cast<int>(3.0 * U(rng));
        // half the draws pin the exponents to the boundary values
        if (U(rng) < 0.5) h.l = 1.0 - 0.5 * h.alpha;
        else h.l = 2.0 * U(rng);
        if (h.l < 0.0) h.l = 0.0;
        if (U(rng) < 0.25) h.k = 2.0 - h.l;
        else if (U(rng) < 0.5) h.k = 1.0 + 0.5 * h.alpha;
        else h.k = 3.0 * U(rng);
        if (h.k < 0.0) h.k = 0.0;

        const int n_match = (detail::case1_matches(h) ? 1 : 0) +
                            (detail::case2_matches(h) ? 1 : 0) +
                            (detail::case3_matches(h) ? 1 : 0) +
                            (detail::case4_matches(h) ? 1 : 0);
        REQUIRE(n_match <= 1);
        if (h.alpha <= 2.0) {
            auto rep = classify(h);
            ++matched_counts[static_cast<int>(rep.matched_case)];
        }
    }
    // the sweep must actually exercise every branch
    for (int c = 1; c <= 4; ++c) REQUIRE(matched_counts[c] > 0);
}

TEST_CASE("feasibility polynomial hand values") {
    auto h = hyp(4.0, 0.0, 0.0, 2.0, 0.0, 1.0, 0.0, 1);
    REQUIRE(h.c3() == Catch::Approx(1.0));
    REQUIRE(inequality_rhs(h, 1.0, 10.0) == Catch::Approx(-36257.0).epsilon(1e-12));
    // r -> 0 limit: -a^2 b^2 + a c^2 + (n a + 2 n^2 (alpha+2) a + a c^2) = 3
    REQUIRE(inequality_rhs(h, 1.0, 1e-9) == Catch::Approx(3.0).margin(1e-6));
}

TEST_CASE("terms without curvature or target vanish to a positive quadratic") {
    // b = c -> 0, C1 -> 0+: remaining value (2 n^2 (alpha+2) - n) r^2 + positive
    HypothesisSet h{1e-18, 0.0, 0.0, 0.0, 1e-12, 0.0, 1e-12, 0.0, 1};
    const double r = 7.0;
    const double expect = (2.0 * 2.0 - 1.0) * r * r + (1.0 + 4.0 + 0.0);
    REQUIRE(inequality_rhs(h, 1.0, r) == Catch::Approx(expect).epsilon(1e-6));
    REQUIRE(inequality_rhs(h, 1.0, r) > 0.0);
}

TEST_CASE("find_r0 returns a radius whose tail is feasible") {
    auto h = hyp(1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1);
    const double r0 = find_r0(h, 1.0, 1e4);
    REQUIRE(r0 > 0.0);
    REQUIRE(r0 < 1e4);
    REQUIRE(inequality_rhs(h, 1.0, r0 + 1.0) < 0.0);
    // + sampled sweep of the whole tail
    for (int j = 0; j < 200; ++j) {
        const double r = r0 * std::pow(1e4 / r0, j / 199.0);
        REQUIRE(inequality_rhs(h, 1.0, r) <= 1e-6);
    }
}

TEST_CASE("find_r0 failure modes") {
    SECTION("no exponent family at all") {
        auto h = hyp(1.0, 1.0, 2.0, 1.0, 0.5, 1.0, 1.0, 1);  // l between the regimes
        REQUIRE_THROWS_AS(find_r0(h, 1.0, 1e4), invalid_hypothesis_error);
    }
    SECTION("family exists but the margin is positive") {
        auto h = hyp(4.0, 0.0, 2.0, 1e-6, 0.0, 1.0, 0.0, 1);  // depth too small
        REQUIRE_THROWS_AS(find_r0(h, 1.0, 1e4), infeasible_window_error);
    }
    SECTION("window too small") {
        auto h = hyp(1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1);
        REQUIRE_THROWS_AS(find_r0(h, 1.0, 1e-3), std::runtime_error);
    }
}

TEST_CASE("scaling shift hand values") {
    SECTION("amplitude-balance boundary") {
        auto h = hyp(1.0, 1.0, 0.0, 2.0, 0.0, 1.0, 2.0, 1);  // k = 2 - l
        auto [shift, S] = scaling_shift([](double) { return -1.0; }, h);
        REQUIRE(shift.condition == ScalingCondition::Cond1);
        REQUIRE(shift.a == Catch::Approx(std::log(2.0) - 1.0));
        REQUIRE(S(3.0) == Catch::Approx(-std::exp(2.0 * shift.a)));
    }
    SECTION("equal constants give bound zero") {
        auto h = hyp(1.0, 1.0, 0.0, 1.5, 0.0, 1.5, 2.0, 2);
        auto [shift, S] = scaling_shift([](double) { return -1.0; }, h);
        REQUIRE(shift.a == Catch::Approx(-1.0));
        REQUIRE(S(1.0) == Catch::Approx(-std::exp(-1.0)));  // e^{(2/2)(-1)} S
    }
    SECTION("critical boundary needs a strict gap") {
        auto h = hyp(4.0, 0.0, 2.0, 2.0, 0.0, 1.0, 2.0, 1);  // b^2 = 4 = 4 n^2 sqrt(C3)
        REQUIRE_THROWS_AS(scaling_shift([](double) { return -1.0; }, h),
                          infeasible_window_error);
    }
    SECTION("interior exponents have no boundary reduction") {
        auto h = hyp(1.0, 1.0, 0.0, 2.0, 0.0, 1.0, 0.5, 1);
        REQUIRE_THROWS_AS(scaling_shift([](double) { return -1.0; }, h),
                          invalid_hypothesis_error);
    }
}

TEST_CASE("asymptotic margin matches the polynomial at large radii") {
    SECTION("critical exponents, both boundary powers") {
        auto h3 = hyp(4.0, 0.0, 2.0, 3.0, 0.0, 1.0, 2.0, 1);  // matched Case3
        const double r = 1e6;
        const double lead = std::pow(r, 3.0 + 0.5 * h3.alpha);
        REQUIRE(inequality_rhs(h3, 1.0, r) / lead ==
                Catch::Approx(-9.0 + 1.0 + 4.0).epsilon(0.01));
    }
    SECTION("critical decay") {
        auto h4 = hyp(4.0, 0.0, 2.0, 3.0, 0.0, 1.0, 0.0, 1);  // matched Case4
        const double r = 1e6;
        const double lead = std::pow(r, 3.0 + 0.5 * h4.alpha);
        REQUIRE(inequality_rhs(h4, 1.0, r) / lead ==
                Catch::Approx(-9.0 + 4.0).epsilon(0.01));
    }
}

TEST_CASE("scaling identity holds to rounding for arbitrary grid functions") {
    // residual(u + a; S) == residual(u; e^{(2/n) a} S), an algebraic identity
    RadialModel model = make_hyperbolic_model(1, 4.0);
    Grid g(4.0, 16);
    auto rng = make_rng(41);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto S_base = [](double r) { return -1.0 - 0.25 * r; };
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> uv(g.size());
        for (auto& x : uv) x = U(rng);
        const double a = U(rng);
        GridFunction u(g, uv);
        std::vector<double> shifted_v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) shifted_v[i] = uv[i] + a;
        const double factor = std::exp(2.0 * a);
        auto lhs = nonlinear_residual(model, GridFunction(g, shifted_v), S_base);
        auto rhs = nonlinear_residual(model, u, [&](double r) { return factor * S_base(r); });
        REQUIRE(sup_diff(lhs, rhs) <= 1e-13);
    }
}
