#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "ccl/grid.hpp"

namespace ccl {

using RadialProfile = std::function<double(double)>;

/// A model Hermitian manifold reduced to radial data.
///
/// The Laplace-Beltrami operator of a radial function is u'' + drift(r) u';
/// the Chern Laplacian subtracts the radial Lee-form component:
///     L u = u'' + (drift(r) - lee_drift(r)) u'.
/// s_profile(r) is the Chern scalar curvature of the background metric.
struct RadialModel {
    int n = 1;                 // complex dimension
    RadialProfile drift;       // 1/length
    RadialProfile lee_drift;   // zero for balanced models
    RadialProfile s_profile;
    double r_max = 0.0;
    double r_D = 0.0;          // decay hypothesis on s holds outside this radius
    bool pole_regular = true;  // r * drift(r) -> 2n-1 as r -> 0+
    std::string name;

    RadialModel(int n_, RadialProfile drift_, RadialProfile lee_, RadialProfile s_,
                double r_max_, double r_D_ = 0.0, bool pole_regular_ = true,
                std::string name_ = "custom")
        : n(n_), drift(std::move(drift_)), lee_drift(std::move(lee_)),
          s_profile(std::move(s_)), r_max(r_max_), r_D(r_D_),
          pole_regular(pole_regular_), name(std::move(name_)) {
        if (n < 1) throw invalid_parameter_error("RadialModel: n must be >= 1");
        if (!(r_max > 0.0)) throw invalid_parameter_error("RadialModel: r_max must be positive");
        if (!(r_max > r_D) || r_D < 0.0)
            throw invalid_parameter_error("RadialModel: require r_max > r_D >= 0");
    }

    /// Effective first-order coefficient of the radial Chern Laplacian.
    double advection(double r) const { return drift(r) - lee_drift(r); }
};

/// Constant-curvature(-1) model in geodesic polar coordinates, treated as
/// balanced: drift (2n-1) coth r, Lee form zero, s a caller-supplied constant.
inline RadialModel make_hyperbolic_model(int n, double r_max, double s_constant = -1.0) {
    if (n < 1) throw invalid_parameter_error("make_hyperbolic_model: n must be >= 1");
    if (!(r_max > 0.0)) throw invalid_parameter_error("make_hyperbolic_model: r_max must be positive");
    const double m = 2.0 * n - 1.0;
    return RadialModel(
        n,
        [m](double r) { return m / std::tanh(r); },
        [](double) { return 0.0; },
        [s_constant](double) { return s_constant; },
        r_max, 0.0, true, "hyperbolic");
}

inline RadialModel make_hyperbolic_model_s(int n, double r_max, RadialProfile s_profile,
                                           double r_D = 0.0) {
    if (n < 1) throw invalid_parameter_error("make_hyperbolic_model: n must be >= 1");
    if (!(r_max > 0.0)) throw invalid_parameter_error("make_hyperbolic_model: r_max must be positive");
    const double m = 2.0 * n - 1.0;
    return RadialModel(
        n,
        [m](double r) { return m / std::tanh(r); },
        [](double) { return 0.0; },
        std::move(s_profile),
        r_max, r_D, true, "hyperbolic");
}

/// Flat comparison model: drift (2n-1)/r.
inline RadialModel make_euclidean_model(int n, double r_max, RadialProfile s_profile) {
    if (n < 1) throw invalid_parameter_error("make_euclidean_model: n must be >= 1");
    if (!(r_max > 0.0)) throw invalid_parameter_error("make_euclidean_model: r_max must be positive");
    const double m = 2.0 * n - 1.0;
    return RadialModel(
        n,
        [m](double r) { return m / r; },
        [](double) { return 0.0; },
        std::move(s_profile),
        r_max, 0.0, true, "euclidean");
}

inline RadialModel make_euclidean_model(int n, double r_max, double s_constant = 0.0) {
    return make_euclidean_model(n, r_max, [s_constant](double) { return s_constant; });
}

/// Second-order finite-difference Chern Laplacian of a radial function:
/// centered stencils inside, ghost-node reflection u'(0) = 0 at the pole
/// (ghost value equals the first node's value), one-sided second-order
/// differences at the outermost node.
///
/// Differences are assembled so that constants map to exact zero.
inline GridFunction chern_laplacian_radial(const RadialModel& model, const GridFunction& u) {
    const Grid& g = u.grid;
    const std::size_t n = g.size();
    if (g.r_max() > model.r_max * (1.0 + 1e-12))
        throw domain_mismatch_error("chern_laplacian_radial: grid exceeds model domain");
    if (n < 4)
        throw domain_mismatch_error("chern_laplacian_radial: need at least 4 nodes");

    const double h = g.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 1.0 / (2.0 * h);
    std::vector<double> out(n);

    // pole: ghost value u[-1] = u[0]
    {
        const double w = model.advection(g.node(0));
        const double d = u[1] - u[0];
        out[0] = d * inv_h2 + w * d * inv_2h;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double w = model.advection(g.node(i));
        const double dp = u[i + 1] - u[i];
        const double dm = u[i] - u[i - 1];
        out[i] = (dp - dm) * inv_h2 + w * (u[i + 1] - u[i - 1]) * inv_2h;
    }
    {
        const std::size_t i = n - 1;
        const double w = model.advection(g.node(i));
        const double d1 = u[i] - u[i - 1];
        const double d2 = u[i - 1] - u[i - 2];
        const double d3 = u[i - 2] - u[i - 3];
        const double upp = (2.0 * d1 - 3.0 * d2 + d3) * inv_h2;
        const double up = (3.0 * d1 - d2) * inv_2h;
        out[i] = upp + w * up;
    }
    return GridFunction(g, std::move(out));
}

} // namespace ccl
