#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "nspr/grid.hpp"

namespace nspr {

/// Real scalar samples on a periodic Grid, x-fastest layout.
class ScalarField {
  public:
    explicit ScalarField(const Grid& grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}

    ScalarField(const Grid& grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) throw ConfigError("sample count must equal n^3");
    }

    /// Sample an analytic function at the grid nodes.
    template <class F>
    static ScalarField from_function(const Grid& grid, F&& f) {
        ScalarField out(grid);
        const int n = grid.n();
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) out.values_[grid.index(i, j, k)] = f(grid.node(i, j, k));
        return out;
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double operator()(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }
    double& operator()(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }

    double mean() const {
        double s = 0.0;
        for (double v : values_) s += v;
        return s / static_cast<double>(values_.size());
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

    /// Trilinear interpolation at x (periodically wrapped); exact on per-cell
    /// trilinear functions, reproduces nodal values and constants.
    double sample(const Vec3& x) const {
        const int n = grid_.n();
        const double h = grid_.spacing();
        double fi[3];
        int i0[3], i1[3];
        for (int d = 0; d < 3; ++d) {
            double s = grid_.wrap(x[d]) / h;
            int c = static_cast<int>(std::floor(s));
            if (c >= n) c -= n;  // wrap() boundary rounding
            fi[d] = s - c;
            i0[d] = c;
            i1[d] = (c + 1) % n;
        }
        const double wx1 = fi[0], wx0 = 1.0 - wx1;
        const double wy1 = fi[1], wy0 = 1.0 - wy1;
        const double wz1 = fi[2], wz0 = 1.0 - wz1;
        const auto& v = values_;
        const Grid& g = grid_;
        double c00 = wx0 * v[g.index(i0[0], i0[1], i0[2])] + wx1 * v[g.index(i1[0], i0[1], i0[2])];
        double c10 = wx0 * v[g.index(i0[0], i1[1], i0[2])] + wx1 * v[g.index(i1[0], i1[1], i0[2])];
        double c01 = wx0 * v[g.index(i0[0], i0[1], i1[2])] + wx1 * v[g.index(i1[0], i0[1], i1[2])];
        double c11 = wx0 * v[g.index(i0[0], i1[1], i1[2])] + wx1 * v[g.index(i1[0], i1[1], i1[2])];
        return wz0 * (wy0 * c00 + wy1 * c10) + wz1 * (wy0 * c01 + wy1 * c11);
    }

  private:
    Grid grid_;
    std::vector<double> values_;
};

/// Free-function spelling used throughout the quadrature code.
inline double sample(const ScalarField& f, const Vec3& x) { return f.sample(x); }

/// Three scalar components on a shared grid.
class VectorField {
  public:
    explicit VectorField(const Grid& grid)
        : components_{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

    VectorField(ScalarField c0, ScalarField c1, ScalarField c2)
        : components_{std::move(c0), std::move(c1), std::move(c2)} {
        if (components_[0].grid() != components_[1].grid() || components_[0].grid() != components_[2].grid())
            throw ConfigError("vector field components must share one grid");
    }

    template <class F>
    static VectorField from_function(const Grid& grid, F&& f) {
        VectorField out(grid);
        const int n = grid.n();
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    Vec3 v = f(grid.node(i, j, k));
                    for (int d = 0; d < 3; ++d) out[d](i, j, k) = v[d];
                }
        return out;
    }

    const Grid& grid() const { return components_[0].grid(); }
    const ScalarField& operator[](int d) const { return components_[d]; }
    ScalarField& operator[](int d) { return components_[d]; }

    Vec3 sample(const Vec3& x) const {
        return {components_[0].sample(x), components_[1].sample(x), components_[2].sample(x)};
    }

    double max_abs() const {
        // max of the euclidean magnitude over nodes
        double m = 0.0;
        const auto& a = components_[0].values();
        const auto& b = components_[1].values();
        const auto& c = components_[2].values();
        for (std::size_t q = 0; q < a.size(); ++q)
            m = std::max(m, a[q] * a[q] + b[q] * b[q] + c[q] * c[q]);
        return std::sqrt(m);
    }

    bool all_finite() const {
        return components_[0].all_finite() && components_[1].all_finite() && components_[2].all_finite();
    }

  private:
    std::array<ScalarField, 3> components_;
};

/// 3x3 array of scalar fields; houses the div^2-form sources G.
class SymTensorField {
  public:
    explicit SymTensorField(const Grid& grid)
        : entries_{ScalarField(grid), ScalarField(grid), ScalarField(grid),
                   ScalarField(grid), ScalarField(grid), ScalarField(grid),
                   ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

    template <class F>
    static SymTensorField from_function(const Grid& grid, F&& f) {
        // f(x) returns a 3x3 array
        SymTensorField out(grid);
        const int n = grid.n();
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    auto m = f(grid.node(i, j, k));
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) out(a, b)(i, j, k) = m[a][b];
                }
        return out;
    }

    const Grid& grid() const { return entries_[0].grid(); }
    const ScalarField& operator()(int a, int b) const { return entries_[3 * a + b]; }
    ScalarField& operator()(int a, int b) { return entries_[3 * a + b]; }

    /// Frobenius norm at x.
    double sample_norm(const Vec3& x) const {
        double s = 0.0;
        for (const auto& e : entries_) {
            double v = e.sample(x);
            s += v * v;
        }
        return std::sqrt(s);
    }

    bool all_finite() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const ScalarField& e) { return e.all_finite(); });
    }

  private:
    std::array<ScalarField, 9> entries_;
};

}  // namespace nspr
