#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ccl/errors.hpp"
#include "ccl/grid.hpp"
#include "ccl/model.hpp"

namespace ccl {

/// Exponent equalities (l = 1 - alpha/2, ...) are compared at this tolerance.
inline constexpr double kExponentTol = 1e-12;

/// Growth/decay constants of the curvature hypotheses.
///
///   Ric^(2)  >= -C1 (1+r)^alpha          (second Chern Ricci lower bound)
///   ||T||    <=  C2 (1+r)^beta           (torsion growth; beta = alpha/2 matched)
///   s(r)     <= -b^2 / r^l   outside D   (background curvature decay)
///   -c^2 (1 + r^k) <= S(r) < 0           (target curvature growth)
struct HypothesisSet {
    double C1 = 1.0;
    double C2 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double b = 1.0;
    double l = 0.0;
    double c = 1.0;
    double k = 0.0;
    int n = 1;

    void validate() const {
        if (n < 1) throw invalid_parameter_error("HypothesisSet: n must be >= 1");
        if (C1 < 0.0 || C2 < 0.0) throw invalid_parameter_error("HypothesisSet: C1, C2 must be >= 0");
        if (!(C1 > 0.0 || C2 > 0.0)) throw invalid_parameter_error("HypothesisSet: C1 + C2 must be positive");
        if (alpha < 0.0 || beta < 0.0 || l < 0.0 || k < 0.0)
            throw invalid_parameter_error("HypothesisSet: exponents must be >= 0");
        if (!(b > 0.0) || !(c > 0.0))
            throw invalid_parameter_error("HypothesisSet: b, c must be positive");
    }

    /// Derived constant C3 = C1/(4n) + n C2^2 / 2, recomputed on access.
    double c3() const {
        return C1 / (4.0 * n) + 0.5 * n * C2 * C2;
    }
};

enum class FeasibleCase : std::uint8_t { None, Case1, Case2, Case3, Case4 };
enum class ScalingCondition : std::uint8_t { None, Cond1, Cond2 };

inline const char* to_string(FeasibleCase c) {
    switch (c) {
        case FeasibleCase::Case1: return "Case1";
        case FeasibleCase::Case2: return "Case2";
        case FeasibleCase::Case3: return "Case3";
        case FeasibleCase::Case4: return "Case4";
        default: return "None";
    }
}

inline const char* to_string(ScalingCondition c) {
    switch (c) {
        case ScalingCondition::Cond1: return "Cond1";
        case ScalingCondition::Cond2: return "Cond2";
        default: return "None";
    }
}

/// Outcome of the case analysis for one hypothesis set.
struct CaseReport {
    FeasibleCase matched_case = FeasibleCase::None;
    ScalingCondition scaling_condition = ScalingCondition::None;
    double C3 = 0.0;
    /// Limiting value of the feasibility polynomial divided by its leading
    /// power; negative means the barrier inequality eventually holds.
    double margin = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> r0;
    /// Case3 only: margin recomputed with the 8 n^2 sqrt(C3) constant, and
    /// whether the set passes with 4 n^2 but fails with 8 n^2.
    std::optional<double> case3_margin_8n2;
    bool case3_constant_discrepancy = false;
    /// alpha > 2 is outside every case; rejected and recorded.
    bool alpha_out_of_range = false;
};

namespace detail {

inline bool nearly(double x, double y) { return std::abs(x - y) <= kExponentTol; }

/// Leading-order coefficient of the expanded feasibility polynomial: terms are
/// grouped by exponent and the coefficients of the maximal exponent summed.
/// Offset-dependent terms never reach the leading power (which is >= 3), so
/// the limit does not depend on the barrier offset a.
inline double asymptotic_margin(const HypothesisSet& h) {
    const double sc3 = std::sqrt(h.c3());
    const double n2 = static_cast<double>(h.n) * h.n;
    struct Term { double power, coeff; };
    const Term terms[] = {
        {4.0 - h.l, -h.b * h.b},
        {2.0 + h.k, h.c * h.c},
        {3.0 + 0.5 * h.alpha, 4.0 * n2 * sc3},
        {2.0, 2.0 * n2 * (h.alpha + 2.0) + h.c * h.c - h.n},
    };
    double pmax = terms[0].power;
    for (const Term& t : terms) pmax = std::max(pmax, t.power);
    double coeff = 0.0;
    for (const Term& t : terms)
        if (nearly(t.power, pmax)) coeff += t.coeff;
    return coeff;
}

inline bool case1_matches(const HypothesisSet& h) {
    return h.alpha < 2.0 - kExponentTol && h.l < 1.0 - 0.5 * h.alpha - kExponentTol &&
           h.k < 2.0 - h.l - kExponentTol;
}
inline bool case2_matches(const HypothesisSet& h) {
    return h.alpha < 2.0 - kExponentTol && h.l < 1.0 - 0.5 * h.alpha - kExponentTol &&
           nearly(h.k, 2.0 - h.l) && (-h.b * h.b + h.c * h.c) < 0.0;
}
inline bool case3_matches(const HypothesisSet& h) {
    return h.alpha <= 2.0 + kExponentTol && nearly(h.l, 1.0 - 0.5 * h.alpha) &&
           nearly(h.k, 1.0 + 0.5 * h.alpha) &&
           (-h.b * h.b + h.c * h.c + 4.0 * h.n * h.n * std::sqrt(h.c3())) < 0.0;
}
inline bool case4_matches(const HypothesisSet& h) {
    return h.alpha <= 2.0 + kExponentTol && nearly(h.l, 1.0 - 0.5 * h.alpha) &&
           h.k < 1.0 + 0.5 * h.alpha - kExponentTol &&
           (-h.b * h.b + 4.0 * h.n * h.n * std::sqrt(h.c3())) < 0.0;
}

inline ScalingCondition scaling_condition_of(const HypothesisSet& h) {
    if (h.alpha < 2.0 - kExponentTol && h.l < 1.0 - 0.5 * h.alpha - kExponentTol &&
        h.k <= 2.0 - h.l + kExponentTol)
        return ScalingCondition::Cond1;
    if (h.alpha <= 2.0 + kExponentTol && nearly(h.l, 1.0 - 0.5 * h.alpha) &&
        h.k <= 1.0 + 0.5 * h.alpha + kExponentTol &&
        h.b * h.b > 4.0 * h.n * h.n * std::sqrt(h.c3()))
        return ScalingCondition::Cond2;
    return ScalingCondition::None;
}

} // namespace detail

/// Classifies a hypothesis set against the four feasibility cases (first match
/// in order) and the two scaling-reduction conditions. Case 3 follows the
/// sharper 4 n^2 sqrt(C3) constant; the report carries the margin under the
/// alternative 8 n^2 constant and flags sets that only pass the sharper one.
inline CaseReport classify(const HypothesisSet& hyp) {
    hyp.validate();
    CaseReport rep;
    rep.C3 = hyp.c3();

    if (hyp.alpha > 2.0 + kExponentTol) {
        rep.alpha_out_of_range = true;
        return rep;
    }

    rep.margin = detail::asymptotic_margin(hyp);
    if (detail::case1_matches(hyp)) {
        rep.matched_case = FeasibleCase::Case1;
        rep.margin = -hyp.b * hyp.b;  // leading power r^{4-l} stands alone
    } else if (detail::case2_matches(hyp)) {
        rep.matched_case = FeasibleCase::Case2;
        rep.margin = -hyp.b * hyp.b + hyp.c * hyp.c;
    } else if (detail::case3_matches(hyp)) {
        rep.matched_case = FeasibleCase::Case3;
        const double sc3 = std::sqrt(hyp.c3());
        rep.margin = -hyp.b * hyp.b + hyp.c * hyp.c + 4.0 * hyp.n * hyp.n * sc3;
        rep.case3_margin_8n2 = -hyp.b * hyp.b + hyp.c * hyp.c + 8.0 * hyp.n * hyp.n * sc3;
        rep.case3_constant_discrepancy = *rep.case3_margin_8n2 >= 0.0;
    } else if (detail::case4_matches(hyp)) {
        rep.matched_case = FeasibleCase::Case4;
        rep.margin = -hyp.b * hyp.b + 4.0 * hyp.n * hyp.n * std::sqrt(hyp.c3());
    }
    rep.scaling_condition = detail::scaling_condition_of(hyp);
    return rep;
}

/// Expanded right side of the barrier feasibility inequality at offset a:
///   -b^2 r^{4-l} - 2 a b^2 r^{2-l} - a^2 b^2 r^{-l} + c^2 r^{2+k} + a c^2 r^k
///   + 4 n^2 sqrt(C3) (1+r)^{alpha/2} (r^3 + a r)
///   + (2 n^2 (alpha+2) + c^2 - n) r^2 + (n a + 2 n^2 (alpha+2) a + a c^2).
/// The log barrier is a lower solution wherever this is <= 0.
inline double inequality_rhs(const HypothesisSet& hyp, double a, double r) {
    if (!(r > 0.0)) throw invalid_parameter_error("inequality_rhs: r must be positive");
    if (!(a > 0.0)) throw invalid_parameter_error("inequality_rhs: a must be positive");
    const double n = hyp.n;
    const double b2 = hyp.b * hyp.b;
    const double c2 = hyp.c * hyp.c;
    const double sc3 = std::sqrt(hyp.c3());
    const double growth = std::pow(1.0 + r, 0.5 * hyp.alpha);
    return -b2 * std::pow(r, 4.0 - hyp.l)
         - 2.0 * a * b2 * std::pow(r, 2.0 - hyp.l)
         - a * a * b2 * std::pow(r, -hyp.l)
         + c2 * std::pow(r, 2.0 + hyp.k)
         + a * c2 * std::pow(r, hyp.k)
         + 4.0 * n * n * sc3 * growth * (r * r * r + a * r)
         + (2.0 * n * n * (hyp.alpha + 2.0) + c2 - n) * r * r
         + (n * a + 2.0 * n * n * (hyp.alpha + 2.0) * a + a * c2);
}

/// Smallest sampled radius beyond which the feasibility inequality holds on
/// the whole window [r0, r_search_max] (10^4 log-spaced samples) and the
/// asymptotic margin certifies validity beyond it.
inline double find_r0(const HypothesisSet& hyp, double a, double r_search_max,
                      double r_floor = 1e-8) {
    hyp.validate();
    if (!(a > 0.0)) throw invalid_parameter_error("find_r0: a must be positive");
    if (!(r_search_max > 0.0)) throw invalid_parameter_error("find_r0: window must be positive");

    const CaseReport rep = classify(hyp);
    const bool exponents_match_some_case =
        detail::case1_matches(hyp) ||
        (hyp.alpha < 2.0 - kExponentTol && hyp.l < 1.0 - 0.5 * hyp.alpha - kExponentTol &&
         detail::nearly(hyp.k, 2.0 - hyp.l)) ||
        (hyp.alpha <= 2.0 + kExponentTol && detail::nearly(hyp.l, 1.0 - 0.5 * hyp.alpha) &&
         hyp.k <= 1.0 + 0.5 * hyp.alpha + kExponentTol);
    if (rep.alpha_out_of_range || !exponents_match_some_case)
        throw invalid_hypothesis_error("find_r0: exponents match no feasibility case");
    if (!(rep.margin < 0.0))
        throw infeasible_window_error("find_r0: asymptotic margin is nonnegative");

    const std::size_t samples = 10000;
    const double lo = std::max(r_floor, 1e-8);
    if (!(r_search_max > lo))
        throw invalid_parameter_error("find_r0: window below the floor");
    const double ratio = std::log(r_search_max / lo) / static_cast<double>(samples - 1);

    // scan backward for the start of the nonpositive tail
    std::size_t first_ok = samples;  // one past the end = empty tail
    for (std::size_t j = samples; j-- > 0;) {
        const double r = lo * std::exp(ratio * static_cast<double>(j));
        if (inequality_rhs(hyp, a, r) <= 0.0)
            first_ok = j;
        else
            break;
    }
    if (first_ok == samples)
        throw infeasible_window_error("find_r0: inequality positive at the window end");
    return lo * std::exp(ratio * static_cast<double>(first_ok));
}

struct ScalingShift {
    double a = 0.0;                       // additive shift of the conformal exponent
    double c_shifted = 0.0;               // c after rescaling the target
    ScalingCondition condition = ScalingCondition::None;
};

/// Boundary-exponent reduction: rescales the target S = e^{(2/n) a} S_tilde so
/// that a strict case applies, with a fixed unit margin below the admissible
/// bound. Returns the shift and the rescaled profile.
inline std::pair<ScalingShift, RadialProfile>
scaling_shift(const RadialProfile& S_target, const HypothesisSet& hyp) {
    hyp.validate();
    ScalingShift out;
    const double n = hyp.n;
    const double b2 = hyp.b * hyp.b;
    const double c2 = hyp.c * hyp.c;

    const bool cond1_boundary = hyp.alpha < 2.0 - kExponentTol &&
                                hyp.l < 1.0 - 0.5 * hyp.alpha - kExponentTol &&
                                detail::nearly(hyp.k, 2.0 - hyp.l);
    const bool cond2_boundary = hyp.alpha <= 2.0 + kExponentTol &&
                                detail::nearly(hyp.l, 1.0 - 0.5 * hyp.alpha) &&
                                detail::nearly(hyp.k, 1.0 + 0.5 * hyp.alpha);

    double bound = 0.0;
    if (cond1_boundary) {
        bound = 0.5 * n * std::log(b2 / c2);
        out.condition = ScalingCondition::Cond1;
    } else if (cond2_boundary) {
        const double gap = b2 - 4.0 * n * n * std::sqrt(hyp.c3());
        if (!(gap > 0.0))
            throw infeasible_window_error("scaling_shift: b^2 must exceed 4 n^2 sqrt(C3)");
        bound = 0.5 * n * std::log(gap / c2);
        out.condition = ScalingCondition::Cond2;
    } else {
        throw invalid_hypothesis_error("scaling_shift: no boundary case applies");
    }

    out.a = bound - 1.0;
    const double factor = std::exp(2.0 / n * out.a);
    out.c_shifted = std::sqrt(factor * c2);
    RadialProfile shifted = [S_target, factor](double r) { return factor * S_target(r); };
    return {out, shifted};
}

} // namespace ccl
