#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "ccl/errors.hpp"

namespace ccl {

/// Uniform staggered grid over (0, r_max]: nodes r_i = (i + 1/2) h, h = r_max / N.
/// Node 0 sits at h/2, so the pole r = 0 is never a sample point.
class Grid {
public:
    Grid(double r_max, std::size_t n_cells) : r_max_(r_max), n_(n_cells) {
        if (!(r_max > 0.0)) throw invalid_parameter_error("Grid: r_max must be positive");
        if (n_cells == 0) throw invalid_parameter_error("Grid: N must be positive");
        h_ = r_max / static_cast<double>(n_cells);
    }

    double r_max() const noexcept { return r_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }

    double node(std::size_t i) const noexcept {
        return (static_cast<double>(i) + 0.5) * h_;
    }

    std::vector<double> nodes() const {
        std::vector<double> r(n_);
        for (std::size_t i = 0; i < n_; ++i) r[i] = node(i);
        return r;
    }

    /// Prefix grid sharing the first m nodes (same spacing, r_max = m h).
    Grid prefix(std::size_t m) const {
        if (m == 0 || m > n_) throw invalid_parameter_error("Grid::prefix: bad cell count");
        return Grid(static_cast<double>(m) * h_, m);
    }

    bool same_spacing(const Grid& other, double rel_tol = 1e-12) const noexcept {
        return std::abs(h_ - other.h_) <= rel_tol * h_;
    }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.n_ == b.n_ && a.r_max_ == b.r_max_;
    }

private:
    double r_max_;
    std::size_t n_;
    double h_;
};

/// Values of a radial function at the grid nodes.
struct GridFunction {
    Grid grid;
    std::vector<double> values;

    GridFunction(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw invalid_parameter_error("GridFunction: value count != node count");
    }

    static GridFunction constant(const Grid& g, double c) {
        return GridFunction(g, std::vector<double>(g.size(), c));
    }

    static GridFunction sample(const Grid& g, const std::function<double(double)>& f) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.node(i));
        return GridFunction(g, v);
    }

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const noexcept { return values[i]; }
    double& operator[](std::size_t i) noexcept { return values[i]; }

    /// Restriction to the first m nodes.
    GridFunction prefix(std::size_t m) const {
        if (m == 0 || m > values.size())
            throw invalid_parameter_error("GridFunction::prefix: bad cell count");
        return GridFunction(grid.prefix(m), std::vector<double>(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m)));
    }

    bool all_finite() const noexcept {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_value() const noexcept {
        double m = values.front();
        for (double v : values) m = std::max(m, v);
        return m;
    }

    double min_value() const noexcept {
        double m = values.front();
        for (double v : values) m = std::min(m, v);
        return m;
    }

    double sup_norm() const noexcept {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

inline double sup_diff(const GridFunction& a, const GridFunction& b) {
    if (a.size() != b.size()) throw domain_mismatch_error("sup_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace ccl
