#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "nspr/errors.hpp"

namespace nspr {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Uniform periodic cube grid, vertex-centered samples at i*(box_length/n).
/// Same point count on all three axes; x runs fastest in storage order.
class Grid {
  public:
    Grid(int n, double box_length = 2.0 * std::numbers::pi) : n_(n), box_(box_length) {
        if (n < 8 || n % 2 != 0) throw ConfigError("grid requires even n >= 8");
        if (!(box_length > 0.0)) throw ConfigError("box_length must be positive");
    }

    int n() const { return n_; }
    double box_length() const { return box_; }
    double spacing() const { return box_ / n_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_) * k);
    }

    Vec3 node(int i, int j, int k) const {
        const double h = spacing();
        return {i * h, j * h, k * h};
    }

    /// Wrap a coordinate into [0, box_length).
    double wrap(double x) const {
        double y = std::fmod(x, box_);
        if (y < 0.0) y += box_;
        // fmod can return box_ exactly after the negative branch
        if (y >= box_) y -= box_;
        return y;
    }

    Vec3 wrap(const Vec3& x) const { return {wrap(x[0]), wrap(x[1]), wrap(x[2])}; }

    /// Minimum-image displacement a - b on the torus, components in [-L/2, L/2).
    Vec3 min_image(const Vec3& a, const Vec3& b) const {
        Vec3 d = a - b;
        for (double& c : d) {
            c = std::remainder(c, box_);
        }
        return d;
    }

    bool operator==(const Grid& o) const { return n_ == o.n_ && box_ == o.box_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

  private:
    int n_;
    double box_;
};

/// Base point of a parabolic cylinder: position x and time t.
struct SpacetimePoint {
    Vec3 x{0.0, 0.0, 0.0};
    double t = 0.0;
};

/// Q_r(x0, t0) = B_r(x0) x (t0 - r^2, t0].
struct ParabolicCylinder {
    SpacetimePoint base;
    double r = 0.0;

    double t_begin() const { return base.t - r * r; }
    double t_end() const { return base.t; }
};

/// Volume of B_r in R^3.
inline double ball_volume(double r) { return 4.0 * std::numbers::pi * r * r * r / 3.0; }

/// Surface measure of the sphere of radius r in R^3.
inline double sphere_area(double r) { return 4.0 * std::numbers::pi * r * r; }

/// |Q_r| = |B_r| * r^2.
inline double cylinder_volume(double r) { return ball_volume(r) * r * r; }

}  // namespace nspr
