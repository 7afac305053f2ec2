#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "ccl/barriers.hpp"
#include "ccl/elliptic.hpp"
#include "ccl/grid.hpp"
#include "ccl/model.hpp"

namespace ccl {

/// Converged conformal exponent with its iteration record.
struct Solution {
    GridFunction u;
    std::size_t iterations = 0;
    double residual_sup = 0.0;            // nonlinear residual, interior nodes
    std::vector<double> trace;            // per-iterate sup-changes
    double bound_lower = 0.0;             // max over nodes of (u_- - u)
    double bound_upper = 0.0;             // max over nodes of (u - b_k)
    double b_k = 0.0;
    double monotone_slack = 0.0;          // max over iterates of max(w_{j+1} - w_j)
    double lower_slack = 0.0;             // max over iterates of max(u_- - w_j)

    Solution(GridFunction u_) : u(std::move(u_)) {}
};

struct MonotoneOptions {
    double tol = 1e-8;
    std::size_t max_iter = 500;
    /// Dirichlet value at the outermost node; defaults to the constant upper
    /// solution b_k (manufactured-solution runs pin the exact trace instead).
    std::optional<double> boundary_value;
};

/// Monotone iteration between a verified lower solution and the constant
/// upper solution b_k on the ball spanned by `grid`:
///   w_0 = b_k,   (-L + c) w_{j+1} = c w_j + S e^{(2/n) w_j} - s,
/// with c the Lipschitz bound of u -> S e^{(2/n)u} on (-inf, b_k]. The
/// iterates decrease pointwise to the maximal solution above u_-.
inline Solution monotone_solve(const RadialModel& model, const RadialProfile& S,
                               const Grid& grid, const Barrier& u_minus,
                               const MonotoneOptions& opt = {}) {
    if (!u_minus.weak_residual_ok)
        throw invalid_barrier_error("monotone_solve: lower solution is not verified");
    if (!u_minus.values.grid.same_spacing(grid) || u_minus.values.size() < grid.size())
        throw domain_mismatch_error("monotone_solve: barrier does not cover the ball");
    const std::size_t n_nodes = grid.size();
    const GridFunction lower = u_minus.values.prefix(n_nodes);
    const double R = grid.r_max();

    std::vector<double> s_vals(n_nodes), S_vals(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double r = grid.node(i);
        s_vals[i] = model.s_profile(r);
        S_vals[i] = S(r);
        if (!(S_vals[i] < 0.0))
            throw sign_error("monotone_solve: S must be negative on the ball");
    }

    const double q = 2.0 / model.n;
    const double bk = upper_constant(model, S, R, lower);
    double max_negS = 0.0;
    for (double v : S_vals) max_negS = std::max(max_negS, -v);
    const double c_it = q * max_negS * std::exp(q * bk);
    const double boundary = opt.boundary_value.value_or(bk);

    Solution sol(GridFunction::constant(grid, bk));
    sol.b_k = bk;
    if (opt.max_iter == 0)
        throw convergence_error("monotone_solve: max_iter = 0", {});

    GridFunction w = GridFunction::constant(grid, bk);
    std::vector<double> rhs(n_nodes);
    bool converged = false;

    for (std::size_t j = 0; j < opt.max_iter; ++j) {
        for (std::size_t i = 0; i < n_nodes; ++i)
            rhs[i] = c_it * w[i] + S_vals[i] * std::exp(q * w[i]) - s_vals[i];
        GridFunction w_next = solve_linear(
            LinearRadialProblem(model, c_it, GridFunction(grid, rhs), R, boundary));

        double change = 0.0, increase = -std::numeric_limits<double>::infinity();
        double below = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_nodes; ++i) {
            change = std::max(change, std::abs(w_next[i] - w[i]));
            increase = std::max(increase, w_next[i] - w[i]);
            below = std::max(below, lower[i] - w_next[i]);
        }
        sol.trace.push_back(change);
        sol.monotone_slack = std::max(sol.monotone_slack, increase);
        sol.lower_slack = std::max(sol.lower_slack, below);
        if (below > 10.0 * opt.tol)
            throw invalid_barrier_error("monotone_solve: iterate crossed the lower solution");

        w = std::move(w_next);
        sol.iterations = j + 1;

        if (change < opt.tol) {
            // stopping needs the nonlinear residual small too, not just stagnation
            const GridFunction res = nonlinear_residual(model, w, S);
            double rsup = 0.0;
            for (std::size_t i = 0; i + 1 < n_nodes; ++i)
                rsup = std::max(rsup, std::abs(res[i]));
            sol.residual_sup = rsup;
            if (rsup < 10.0 * opt.tol) { converged = true; break; }
        }
    }

    if (!converged)
        throw convergence_error("monotone_solve: no convergence within max_iter", sol.trace);

    sol.u = w;
    sol.bound_lower = 0.0;
    sol.bound_upper = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_nodes; ++i) {
        sol.bound_lower = std::max(sol.bound_lower, lower[i] - w[i]);
        sol.bound_upper = std::max(sol.bound_upper, w[i] - bk);
    }
    return sol;
}

struct ExhaustionResult {
    std::vector<Solution> ball_solutions;   // one per radius, index order
    std::vector<double> compact_trace;      // sup over r <= radii[0] of |u_{k+1} - u_k|
    bool trace_nonincreasing = true;
    bool final_below_tol = false;
    double c_loc = 0.0;                     // uniform sup bound on the core ball
};

struct ExhaustionOptions {
    double tol = 1e-8;
    std::size_t max_iter = 500;
    /// Threshold for the final compact-trace entry; the boundary layer decays
    /// like e^{-dist} in the ball radius, far slower than the solver tol.
    double compact_tol = 1e-3;
    /// Cells of the largest ball; smaller balls reuse the same spacing so that
    /// nodes align across the family.
    std::size_t n_cells = 2048;
};

/// Solves on each ball of an increasing exhaustion and records the diagonal
/// stabilization on the core ball r <= radii[0].
inline ExhaustionResult exhaustion_solve(const RadialModel& model, const RadialProfile& S,
                                         const std::vector<double>& radii,
                                         const Barrier& u_minus,
                                         const ExhaustionOptions& opt = {}) {
    if (radii.size() < 2)
        throw invalid_parameter_error("exhaustion_solve: need at least 2 radii");
    for (std::size_t k = 0; k + 1 < radii.size(); ++k)
        if (radii[k + 1] < radii[k])
            throw invalid_parameter_error("exhaustion_solve: radii must be nondecreasing");
    if (radii.back() > model.r_max * (1.0 + 1e-12))
        throw invalid_parameter_error("exhaustion_solve: radii exceed the model domain");

    const double h = radii.back() / static_cast<double>(opt.n_cells);
    ExhaustionResult out;
    MonotoneOptions mopt;
    mopt.tol = opt.tol;
    mopt.max_iter = opt.max_iter;

    std::size_t core_cells = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const std::size_t cells = static_cast<std::size_t>(std::llround(radii[k] / h));
        Grid g(static_cast<double>(cells) * h, cells);
        if (k == 0) {
            core_cells = cells;
            while (core_cells > 0 && g.node(core_cells - 1) > radii[0]) --core_cells;
        }
        out.ball_solutions.push_back(monotone_solve(model, S, g, u_minus, mopt));
    }

    for (std::size_t k = 0; k + 1 < out.ball_solutions.size(); ++k) {
        const GridFunction& a = out.ball_solutions[k].u;
        const GridFunction& b = out.ball_solutions[k + 1].u;
        double d = 0.0;
        for (std::size_t i = 0; i < core_cells; ++i)
            d = std::max(d, std::abs(a[i] - b[i]));
        out.compact_trace.push_back(d);
    }
    for (std::size_t k = 1; k < out.compact_trace.size(); ++k)
        if (out.compact_trace[k] > out.compact_trace[k - 1] + 1e-12)
            out.trace_nonincreasing = false;
    out.final_below_tol = out.compact_trace.back() <= opt.compact_tol;

    for (const Solution& s : out.ball_solutions) {
        double m = 0.0;
        for (std::size_t i = 0; i < std::min(core_cells, s.u.size()); ++i)
            m = std::max(m, std::abs(s.u[i]));
        out.c_loc = std::max(out.c_loc, m);
    }
    return out;
}

struct LocalBoundReport {
    double sup_max = 0.0;                 // max sup-norm on [0, r_compact]
    double l2_max = 0.0;                  // max discrete L2 norm on the larger ball
    std::vector<double> ratios;           // per-solution sup / max(L2, 1)
    double trend_slope = 0.0;             // least-squares slope of ratios vs index
    bool bounded = true;                  // slope <= 0.01 per index
};

/// Uniform local bound check across a solution family: the sup-norm on the
/// compact core stays controlled by the L2 norm on a larger ball, with no
/// growth trend along the family.
inline LocalBoundReport local_bound_report(const std::vector<GridFunction>& solutions,
                                           double r_compact) {
    if (solutions.empty())
        throw invalid_parameter_error("local_bound_report: empty family");
    LocalBoundReport rep;
    double tau = 2.0 * r_compact;
    for (const GridFunction& u : solutions) {
        if (u.grid.r_max() < r_compact * (1.0 - 1e-12))
            throw domain_mismatch_error("local_bound_report: solution not defined on the core");
        tau = std::min(tau, u.grid.r_max());
    }

    for (const GridFunction& u : solutions) {
        double sup = 0.0, l2sq = 0.0;
        const double h = u.grid.spacing();
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double r = u.grid.node(i);
            if (r <= r_compact) sup = std::max(sup, std::abs(u[i]));
            if (r <= tau) l2sq += u[i] * u[i] * h;
        }
        const double l2 = std::sqrt(l2sq);
        rep.sup_max = std::max(rep.sup_max, sup);
        rep.l2_max = std::max(rep.l2_max, l2);
        rep.ratios.push_back(sup / std::max(l2, 1.0));
    }

    const std::size_t n = rep.ratios.size();
    if (n >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i);
            sx += x; sy += rep.ratios[i]; sxx += x * x; sxy += x * rep.ratios[i];
        }
        const double denom = n * sxx - sx * sx;
        rep.trend_slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    }
    rep.bounded = rep.trend_slope <= 0.01;
    return rep;
}

} // namespace ccl
