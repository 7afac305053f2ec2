#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "ccl/elliptic.hpp"
#include "ccl/grid.hpp"
#include "ccl/model.hpp"

namespace ccl {

enum class BarrierKind : std::uint8_t {
    LogBarrier,
    InnerDirichlet,
    Glued,
    ConstantBump,
    ConstantUpper,
};

inline const char* to_string(BarrierKind k) {
    switch (k) {
        case BarrierKind::LogBarrier: return "log_barrier";
        case BarrierKind::InnerDirichlet: return "inner_dirichlet";
        case BarrierKind::Glued: return "glued";
        case BarrierKind::ConstantBump: return "constant_bump";
        default: return "constant_upper";
    }
}

/// A candidate lower (or upper) solution with its construction metadata.
struct Barrier {
    GridFunction values;
    BarrierKind kind;
    std::optional<double> a;        // offset in -(n/2) log(r^2 + a)
    std::optional<double> r0;       // feasibility threshold
    std::optional<double> r_glue;   // gluing radius
    /// True once the lower-solution inequality has been verified discretely
    /// (pointwise residual on smooth regions; derivative jump at r_glue).
    bool weak_residual_ok = false;
};

/// u1 = -(n/2) log(r^2 + a) sampled on the grid.
inline GridFunction log_barrier(int n, double a, const Grid& grid) {
    if (!(a > 0.0)) throw invalid_parameter_error("log_barrier: a must be positive");
    if (n < 1) throw invalid_parameter_error("log_barrier: n must be >= 1");
    const double half_n = 0.5 * static_cast<double>(n);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        v[i] = -half_n * std::log(r * r + a);
    }
    return GridFunction(grid, std::move(v));
}

struct InnerBarrier {
    GridFunction u2;          // defined on the prefix grid up to r_omega
    double C;                 // constant right side of L u2 = C
    double boundary_value;    // Dirichlet datum = log barrier at the boundary node
    double r_boundary;        // radius of the Dirichlet node
};

/// Solves L u2 = C on (0, r_omega) with u2'(0) = 0 and log-barrier Dirichlet
/// data, where C = (-min S) e^{(2/n) max u1} makes u2 a regional lower
/// solution. Boundary data and C are evaluated at the outermost staggered
/// node, so the inner grid is an exact prefix of `grid`.
inline InnerBarrier inner_dirichlet_barrier(const RadialModel& model, const RadialProfile& S,
                                            double r_omega, double a, const Grid& grid) {
    if (!(a > 0.0)) throw invalid_parameter_error("inner_dirichlet_barrier: a must be positive");
    if (!(r_omega > 0.0) || r_omega > grid.r_max() * (1.0 + 1e-12))
        throw invalid_parameter_error("inner_dirichlet_barrier: r_omega outside grid");

    const double h = grid.spacing();
    const std::size_t m = std::min(grid.size(),
                                   static_cast<std::size_t>(std::llround(r_omega / h)));
    if (m < 16) throw invalid_parameter_error("inner_dirichlet_barrier: domain too coarse");
    const Grid inner = grid.prefix(m);

    double min_s = S(inner.node(0));
    for (std::size_t i = 0; i < m; ++i) min_s = std::min(min_s, S(inner.node(i)));
    if (!(min_s < 0.0) || S(inner.node(m - 1)) >= 0.0)
        throw sign_error("inner_dirichlet_barrier: S must be negative on the domain");
    for (std::size_t i = 0; i < m; ++i)
        if (!(S(inner.node(i)) < 0.0))
            throw sign_error("inner_dirichlet_barrier: S must be negative on the domain");

    const double r_b = inner.node(m - 1);
    const double half_n = 0.5 * static_cast<double>(model.n);
    const double g = -half_n * std::log(r_b * r_b + a);
    const double C = (-min_s) * std::exp(2.0 / model.n * g);  // = (-min S)/(r_b^2 + a)

    // (-L) u2 = -C with the log-barrier trace on the boundary node
    LinearRadialProblem problem(model, 0.0, GridFunction::constant(inner, -C),
                                inner.r_max(), g);
    GridFunction u2 = solve_linear(problem);

    // discrete maximum principle: L u2 = C > 0 puts the maximum on the boundary
    if (!(u2.max_value() <= g + 1e-10))
        throw construction_error("inner_dirichlet_barrier: maximum principle violated");

    return InnerBarrier{std::move(u2), C, g, r_b};
}

/// Second-order one-sided slope at the cell edge m*h from three nodes beyond
/// it, at offsets sigma*(h/2, 3h/2, 5h/2). The symmetric forward/backward
/// pair shares its O(h^2) truncation term, which therefore cancels in the
/// jump; the surviving O(h^3) term scales with sigma^3 and is removed by
/// Richardson extrapolation over sigma = 1, 3 in `edge_slope_jump`.
inline double edge_forward_slope(const GridFunction& u, std::size_t m, std::size_t sigma = 1) {
    const double h = u.grid.spacing() * static_cast<double>(sigma);
    const std::size_t i0 = m + (sigma - 1) / 2;
    const std::size_t i1 = m + (3 * sigma - 1) / 2;
    const std::size_t i2 = m + (5 * sigma - 1) / 2;
    return (-2.0 * u[i0] + 3.0 * u[i1] - u[i2]) / h;
}

inline double edge_backward_slope(const GridFunction& u, std::size_t m, std::size_t sigma = 1) {
    const double h = u.grid.spacing() * static_cast<double>(sigma);
    const std::size_t i0 = m - (sigma + 1) / 2;
    const std::size_t i1 = m - (3 * sigma + 1) / 2;
    const std::size_t i2 = m - (5 * sigma + 1) / 2;
    return (2.0 * u[i0] - 3.0 * u[i1] + u[i2]) / h;
}

/// Jump of the one-sided slopes at the edge m*h, outer minus inner, with the
/// O(h^3) estimator bias extrapolated away. A smooth function measures
/// O(h^5); a genuine kink measures its true size.
inline double edge_slope_jump(const GridFunction& outer, const GridFunction& inner,
                              std::size_t m) {
    const double j1 = edge_forward_slope(outer, m, 1) - edge_backward_slope(inner, m, 1);
    const double j3 = edge_forward_slope(outer, m, 3) - edge_backward_slope(inner, m, 3);
    return (27.0 * j1 - j3) / 26.0;
}

/// Pastes u2 (inside) with u1 (outside) at r_glue. The pasted function is a
/// weak lower solution only if the inside and outside traces agree and the
/// one-sided derivative jump J = u1'(r_glue+) - u2'(r_glue-) is nonnegative,
/// which keeps the singular part of the distributional Laplacian favorable.
inline Barrier glue_barrier(const GridFunction& u1, const GridFunction& u2, double r_glue) {
    const Grid& g = u1.grid;
    if (!u2.grid.same_spacing(g))
        throw domain_mismatch_error("glue_barrier: grids have different spacing");
    const std::size_t m = u2.size();
    if (m < 8 || m + 8 > u1.size())
        throw domain_mismatch_error("glue_barrier: gluing radius too close to a boundary");
    if (std::abs(u2.grid.r_max() - r_glue) > 0.51 * g.spacing())
        throw domain_mismatch_error("glue_barrier: u2 does not extend to r_glue");

    const double mismatch = std::abs(u1[m - 1] - u2[m - 1]);
    if (mismatch > 1e-10)
        throw continuity_error("glue_barrier: boundary values disagree by " +
                               std::to_string(mismatch));

    const double jump = edge_slope_jump(u1, u2, m);

    std::vector<double> v(u1.values);
    for (std::size_t i = 0; i < m; ++i) v[i] = u2[i];

    Barrier out{GridFunction(g, std::move(v)), BarrierKind::Glued,
                std::nullopt, std::nullopt, r_glue, jump >= -1e-10};
    if (jump < -1e-10) {
        std::ostringstream msg;
        msg << "glue_barrier: derivative jump " << jump
            << " at r = " << r_glue << " breaks the lower-solution inequality"
            << " (enlarge r_glue)";
        throw invalid_gluing_error(msg.str());
    }
    return out;
}

/// Quintic smoothstep cutoff: 1 on (-inf, lo], 0 on [hi, inf), C^2 in between.
inline double smooth_cutoff(double r, double lo, double hi) {
    if (r <= lo) return 1.0;
    if (r >= hi) return 0.0;
    const double t = (r - lo) / (hi - lo);
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

struct BumpBarrier {
    GridFunction phi;        // compactly supported conformal pre-shift
    GridFunction shifted_s;  // curvature after the pre-shift, <= -epsilon
    double a;                // constant lower-solution level
    double epsilon;
    double delta;            // value of L phi on the core region
    double C;                // rescaling bound on the negative part of L phi1
};

/// Constant-plus-bump lower solution for curvature profiles that vanish on a
/// compact set: solve L phi0 = delta1 out to r_D2, cut off between r_D1 and
/// r_D2, rescale so L phi >= -b^2/2, and pick the constant level from the
/// shifted curvature bound.
inline BumpBarrier constant_bump_barrier(const RadialModel& model, const RadialProfile& S,
                                         double b, double c, double delta1,
                                         double r_D1, double r_D2, const Grid& grid) {
    if (!(b > 0.0) || !(c > 0.0) || !(delta1 > 0.0))
        throw invalid_parameter_error("constant_bump_barrier: b, c, delta must be positive");
    const double q = 2.0 / model.n;
    const double b2 = b * b;

    // hypotheses on the background curvature
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        const double s = model.s_profile(r);
        if (s > 1e-12) throw sign_error("constant_bump_barrier: s must be <= 0");
        if (r > model.r_D && s > -b2 + 1e-9)
            throw sign_error("constant_bump_barrier: s must be <= -b^2 outside D");
        if (!(S(r) < 0.0) || S(r) < -c * c - 1e-9)
            throw sign_error("constant_bump_barrier: target must satisfy -c^2 <= S < 0");
    }

    if (model.r_D <= 0.0) {
        // D empty: no bump needed, the constant level comes straight from b
        GridFunction phi = GridFunction::constant(grid, 0.0);
        GridFunction s1 = GridFunction::sample(grid, model.s_profile);
        const double a = 0.5 * model.n * std::log(b2 / (c * c)) - 1.0;
        return BumpBarrier{std::move(phi), std::move(s1), a, b2, 0.0, 0.0};
    }

    if (!(model.r_D < r_D1 && r_D1 < r_D2 && r_D2 <= grid.r_max() * (1.0 + 1e-12)))
        throw invalid_parameter_error("constant_bump_barrier: need r_D < r_D1 < r_D2 <= r_max");

    const double h = grid.spacing();
    const std::size_t m = std::min(grid.size(),
                                   static_cast<std::size_t>(std::llround(r_D2 / h)));
    if (m < 16) throw invalid_parameter_error("constant_bump_barrier: domain too coarse");
    const Grid inner = grid.prefix(m);

    // (i) core profile: L phi0 = delta1, boundary value delta2 = delta1
    LinearRadialProblem core(model, 0.0, GridFunction::constant(inner, -delta1),
                             inner.r_max(), delta1);
    const GridFunction phi0 = solve_linear(core);

    // (ii) cutoff extension to the full grid
    std::vector<double> phi1_v(grid.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i)
        phi1_v[i] = phi0[i] * smooth_cutoff(grid.node(i), r_D1, r_D2);
    GridFunction phi1(grid, std::move(phi1_v));

    // (iii) rescale so the negative part of L phi stays above -b^2/2
    const GridFunction lap1 = chern_laplacian_radial(model, phi1);
    const double neg = -lap1.min_value();
    double scale = 1.0;
    if (neg > 0.0) scale = b2 / (2.0 * neg);
    const double C_bound = std::max(neg, 0.0);
    const double delta = scale * delta1;

    std::vector<double> phi_v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) phi_v[i] = scale * phi1[i];
    GridFunction phi(grid, std::move(phi_v));

    const GridFunction lap = chern_laplacian_radial(model, phi);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (lap[i] < -0.5 * b2 - 1e-8) {
            std::ostringstream msg;
            msg << "constant_bump_barrier: L phi = " << lap[i] << " < -b^2/2 at r = "
                << grid.node(i);
            throw construction_error(msg.str());
        }
    }

    // (iv) curvature floor of the shifted metric
    const double phi_sup = phi.sup_norm();
    const double epsilon = std::exp(-q * phi_sup) * std::min(delta, 0.5 * b2);

    // (v) shifted curvature s1 = e^{-(2/n) phi} (-L phi + s)
    std::vector<double> s1_v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        s1_v[i] = std::exp(-q * phi[i]) * (-lap[i] + model.s_profile(r));
    }
    GridFunction s1(grid, std::move(s1_v));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (s1[i] > -epsilon + 1e-8) {
            std::ostringstream msg;
            msg << "constant_bump_barrier: shifted curvature " << s1[i]
                << " exceeds -epsilon at r = " << grid.node(i);
            throw construction_error(msg.str());
        }
    }

    const double a = 0.5 * model.n * std::log(epsilon / (c * c)) - 1.0;
    return BumpBarrier{std::move(phi), std::move(s1), a, epsilon, delta, C_bound};
}

/// Constant upper solution b_k = max{(n/2) log(C_k / C'_k), max u_-} + 1 with
/// C_k = -min s + 1 and C'_k = -max S over the ball.
inline double upper_constant(const RadialModel& model, const RadialProfile& S, double R,
                             const GridFunction& u_minus) {
    const Grid& g = u_minus.grid;
    double min_s = std::numeric_limits<double>::infinity();
    double max_S = -std::numeric_limits<double>::infinity();
    double max_um = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        if (r > R * (1.0 + 1e-12)) break;
        min_s = std::min(min_s, model.s_profile(r));
        max_S = std::max(max_S, S(r));
        max_um = std::max(max_um, u_minus[i]);
        any = true;
    }
    if (!any) throw invalid_parameter_error("upper_constant: empty ball");
    if (max_S >= 0.0) throw sign_error("upper_constant: S must be negative on the ball");
    const double Ck = std::max(-min_s, 0.0) + 1.0;
    const double Ckp = -max_S;
    return std::max(0.5 * model.n * std::log(Ck / Ckp), max_um) + 1.0;
}

/// Discrete verification of the lower-solution inequality: pointwise residual
/// at most `tol` away from the gluing interface (or everywhere when there is
/// none), and a nonnegative derivative jump for glued barriers. Updates and
/// returns the barrier's weak_residual_ok flag.
inline bool verify_lower_solution(const RadialModel& model, Barrier& barrier,
                                  const RadialProfile& S, double tol = 1e-8) {
    const GridFunction res = nonlinear_residual(model, barrier.values, S);
    const Grid& g = barrier.values.grid;
    bool ok = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (barrier.r_glue && std::abs(g.node(i) - *barrier.r_glue) <= 1.5 * g.spacing())
            continue;  // interface stencils carry the kink's singular part
        if (res[i] > tol) { ok = false; break; }
    }
    if (barrier.kind == BarrierKind::Glued)
        ok = ok && barrier.weak_residual_ok;
    barrier.weak_residual_ok = ok;
    return ok;
}

} // namespace ccl
