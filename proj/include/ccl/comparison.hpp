#pragma once

#include <cmath>
#include <cstddef>

#include "ccl/errors.hpp"
#include "ccl/hypotheses.hpp"

namespace ccl {

namespace detail {

/// Composite Simpson rule on [0, t] with m (even) intervals.
template <typename F>
double simpson(const F& f, double t, std::size_t m) {
    const double h = t / static_cast<double>(m);
    double odd = 0.0, even = 0.0;
    for (std::size_t j = 1; j < m; j += 2) odd += f(h * static_cast<double>(j));
    for (std::size_t j = 2; j < m; j += 2) even += f(h * static_cast<double>(j));
    return h / 3.0 * (f(0.0) + 4.0 * odd + 2.0 * even + f(t));
}

/// Step-halving Simpson quadrature to a relative tolerance.
template <typename F>
double adaptive_simpson(const F& f, double t, double rel_tol) {
    std::size_t m = 16;
    double prev = simpson(f, t, m);
    for (int iter = 0; iter < 22; ++iter) {
        m *= 2;
        const double cur = simpson(f, t, m);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

} // namespace detail

/// Drift comparison bound 4n h'(t)/h(t) built from the growth envelope
///   F(r) = C1/(4n) (1+r)^alpha + (n C2^2/2) (1+r)^{2 beta},
///   h(t) = F(0)^{-1/2} (exp(int_0^t sqrt(F)) - 1).
/// The ratio is evaluated in the overflow-safe form
///   4n sqrt(F(t)) (1 + 1/expm1(I)),  I = int_0^t sqrt(F).
inline double comparison_bound_general(double C1, double C2, double alpha, double beta,
                                       int n, double t) {
    if (!(t > 0.0)) throw invalid_parameter_error("comparison_bound_general: t must be positive");
    if (n < 1) throw invalid_parameter_error("comparison_bound_general: n must be >= 1");
    if (C1 < 0.0 || C2 < 0.0 || alpha < 0.0 || beta < 0.0)
        throw invalid_parameter_error("comparison_bound_general: constants must be >= 0");
    const double f0 = C1 / (4.0 * n) + 0.5 * n * C2 * C2;
    if (!(f0 > 0.0))
        throw invalid_parameter_error("comparison_bound_general: F(0) must be positive");

    auto sqrt_f = [&](double s) {
        const double F = C1 / (4.0 * n) * std::pow(1.0 + s, alpha) +
                         0.5 * n * C2 * C2 * std::pow(1.0 + s, 2.0 * beta);
        return std::sqrt(F);
    };
    const double integral = detail::adaptive_simpson(sqrt_f, t, 1e-8);
    const double em = std::expm1(integral);
    const double factor = std::isinf(em) ? 1.0 : 1.0 + 1.0 / em;
    return 4.0 * n * sqrt_f(t) * factor;
}

/// Matched-exponent closed form (beta = alpha/2):
///   2n(alpha+2)/r + 4n sqrt(C3) (1+r)^{alpha/2},  C3 = C1/(4n) + n C2^2/2.
inline double comparison_bound_matched(const HypothesisSet& hyp, double r) {
    if (!(r > 0.0)) throw invalid_parameter_error("comparison_bound_matched: r must be positive");
    if (std::abs(hyp.beta - 0.5 * hyp.alpha) > kExponentTol)
        throw invalid_hypothesis_error("comparison_bound_matched: requires beta = alpha/2");
    const double n = hyp.n;
    return 2.0 * n * (hyp.alpha + 2.0) / r +
           4.0 * n * std::sqrt(hyp.c3()) * std::pow(1.0 + r, 0.5 * hyp.alpha);
}

} // namespace ccl
