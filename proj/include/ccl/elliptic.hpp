#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ccl/grid.hpp"
#include "ccl/model.hpp"

namespace ccl {

/// Solves a tridiagonal system by the Thomas algorithm; falls back to banded
/// Gaussian elimination with partial pivoting when a pivot degenerates.
/// lower[0] and upper[n-1] are ignored.
inline std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper,
                                             const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0)
        throw invalid_parameter_error("solve_tridiagonal: band size mismatch");

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max({scale, std::abs(diag[i]), std::abs(lower[i]), std::abs(upper[i])});
    const double tiny = 1e-14 * scale;

    // plain Thomas sweep
    {
        std::vector<double> c(n), d(n);
        bool ok = true;
        double piv = diag[0];
        if (std::abs(piv) <= tiny) ok = false;
        if (ok) {
            c[0] = upper[0] / piv;
            d[0] = rhs[0] / piv;
            for (std::size_t i = 1; i < n && ok; ++i) {
                piv = diag[i] - lower[i] * c[i - 1];
                if (std::abs(piv) <= tiny) { ok = false; break; }
                c[i] = upper[i] / piv;
                d[i] = (rhs[i] - lower[i] * d[i - 1]) / piv;
            }
        }
        if (ok) {
            std::vector<double> x(n);
            x[n - 1] = d[n - 1];
            for (std::size_t k = n - 1; k-- > 0;) x[k] = d[k] - c[k] * x[k + 1];
            return x;
        }
    }

    // partial pivoting; row swaps introduce one extra superdiagonal
    std::vector<double> a(n), b(n), c(n, 0.0), e(n, 0.0), f(rhs);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = lower[i];
        b[i] = diag[i];
        if (i + 1 < n) c[i] = upper[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(a[i + 1]) > std::abs(b[i])) {
            std::swap(b[i], a[i + 1]);
            std::swap(c[i], b[i + 1]);
            std::swap(e[i], c[i + 1]);
            std::swap(f[i], f[i + 1]);
        }
        if (std::abs(b[i]) <= tiny)
            throw singular_system_error("solve_tridiagonal: zero pivot with pivoting");
        const double m = a[i + 1] / b[i];
        b[i + 1] -= m * c[i];
        c[i + 1] -= m * e[i];
        f[i + 1] -= m * f[i];
    }
    if (std::abs(b[n - 1]) <= tiny)
        throw singular_system_error("solve_tridiagonal: singular system");
    std::vector<double> x(n);
    x[n - 1] = f[n - 1] / b[n - 1];
    if (n >= 2) x[n - 2] = (f[n - 2] - c[n - 2] * x[n - 1]) / b[n - 2];
    for (std::size_t k = n; k-- > 2;) {
        const std::size_t i = k - 2;
        x[i] = (f[i] - c[i] * x[i + 1] - e[i] * x[i + 2]) / b[i];
    }
    return x;
}

/// Linear radial Dirichlet problem (-L + c) u = f on (0, R]:
/// symmetry condition at the pole, value pinned at the outermost node.
struct LinearRadialProblem {
    RadialModel model;
    double c_coeff;       // zeroth-order coefficient, >= 0
    GridFunction rhs;
    double R;
    double boundary_value;

    LinearRadialProblem(RadialModel m, double c, GridFunction f, double R_, double bv)
        : model(std::move(m)), c_coeff(c), rhs(std::move(f)), R(R_), boundary_value(bv) {
        if (c_coeff < 0.0)
            throw invalid_parameter_error("LinearRadialProblem: c_coeff must be >= 0");
        if (R > model.r_max * (1.0 + 1e-12))
            throw domain_mismatch_error("LinearRadialProblem: R exceeds model domain");
        if (std::abs(rhs.grid.r_max() - R) > 1e-12 * R)
            throw domain_mismatch_error("LinearRadialProblem: rhs grid does not span (0, R]");
    }
};

/// Second-order centered discretization of (-L + c) u = f, assembled as a
/// tridiagonal system and solved directly. The Dirichlet value is imposed at
/// the outermost staggered node r = R - h/2.
inline GridFunction solve_linear(const LinearRadialProblem& p) {
    const Grid& g = p.rhs.grid;
    const std::size_t n = g.size();
    if (n < 16)
        throw invalid_parameter_error("solve_linear: need N >= 16");

    const double h = g.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 1.0 / (2.0 * h);

    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);

    {   // pole row, ghost u[-1] = u[0]
        const double w = p.model.advection(g.node(0));
        diag[0] = inv_h2 + w * inv_2h + p.c_coeff;
        upper[0] = -inv_h2 - w * inv_2h;
        rhs[0] = p.rhs[0];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double w = p.model.advection(g.node(i));
        lower[i] = -inv_h2 + w * inv_2h;
        diag[i] = 2.0 * inv_h2 + p.c_coeff;
        upper[i] = -inv_h2 - w * inv_2h;
        rhs[i] = p.rhs[i];
    }
    {   // Dirichlet row
        diag[n - 1] = 1.0;
        rhs[n - 1] = p.boundary_value;
    }

    std::vector<double> x = solve_tridiagonal(lower, diag, upper, rhs);

    // direct solve: verify the discrete residual is at rounding level
    double res = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ax = diag[i] * x[i];
        double row = std::abs(diag[i] * x[i]);
        if (i > 0) { ax += lower[i] * x[i - 1]; row += std::abs(lower[i] * x[i - 1]); }
        if (i + 1 < n) { ax += upper[i] * x[i + 1]; row += std::abs(upper[i] * x[i + 1]); }
        res = std::max(res, std::abs(ax - rhs[i]));
        scale = std::max({scale, std::abs(rhs[i]), row});
    }
    if (!(res <= 1e-12 * scale))
        throw singular_system_error("solve_linear: discrete residual too large");

    return GridFunction(g, std::move(x));
}

/// Pointwise residual of the curvature equation: -L u + s - S e^{(2/n) u}.
inline GridFunction nonlinear_residual(const RadialModel& model, const GridFunction& u,
                                       const RadialProfile& S) {
    GridFunction lap = chern_laplacian_radial(model, u);
    const double q = 2.0 / static_cast<double>(model.n);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = u.grid.node(i);
        out[i] = -lap[i] + model.s_profile(r) - S(r) * std::exp(q * u[i]);
    }
    return GridFunction(u.grid, std::move(out));
}

} // namespace ccl
