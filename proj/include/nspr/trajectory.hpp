#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "nspr/average.hpp"
#include "nspr/field.hpp"
#include "nspr/sampling.hpp"
#include "nspr/spectral.hpp"

namespace nspr {

/// One stored time level: velocity, zero-mean pressure, and the spectral
/// |Du|^2 field (precomputed so cylinder energies never re-differentiate).
struct Snapshot {
    VectorField u;
    ScalarField p;
    ScalarField grad_sq;
};

inline Snapshot make_snapshot(VectorField u, ScalarField p) {
    ScalarField gs = spectral::grad_norm_sq(u);
    return Snapshot{std::move(u), std::move(p), std::move(gs)};
}

/// Time-ordered (u, P) snapshots on one grid — the discrete suitable-pair.
/// Immutable after construction; all evaluations are pure.
class Trajectory {
  public:
    Trajectory(Grid grid, std::vector<double> times, std::vector<Snapshot> snaps,
               std::string provenance = "")
        : grid_(grid), times_(std::move(times)), snaps_(std::move(snaps)), provenance_(std::move(provenance)) {
        if (times_.empty() || times_.size() != snaps_.size())
            throw ConfigError("trajectory needs one time per snapshot");
        if (!std::is_sorted(times_.begin(), times_.end()))
            throw ConfigError("trajectory times must be ascending");
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& times() const { return times_; }
    std::size_t snapshot_count() const { return snaps_.size(); }
    const Snapshot& snapshot(std::size_t i) const { return snaps_[i]; }
    const std::string& provenance() const { return provenance_; }

    double time_begin() const { return times_.front(); }
    double time_end() const { return times_.back(); }
    double box_length() const { return grid_.box_length(); }

    /// Index of the last snapshot with time <= t (clamped bracketing pair).
    std::pair<std::size_t, double> bracket(double t) const {
        const double tol = 1e-9 * std::max(1.0, time_end() - time_begin());
        if (t < time_begin() - tol || t > time_end() + tol)
            throw TimeRangeUnavailable("t=" + std::to_string(t) + " outside [" +
                                       std::to_string(time_begin()) + ", " + std::to_string(time_end()) + "]");
        t = std::clamp(t, time_begin(), time_end());
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - times_.begin());
        if (hi == 0) return {0, 0.0};
        if (hi == times_.size()) return {times_.size() - 2, 1.0};
        std::size_t lo = hi - 1;
        double dt = times_[hi] - times_[lo];
        return {lo, dt > 0.0 ? (t - times_[lo]) / dt : 0.0};
    }

    Vec3 velocity(const Vec3& x, double t) const {
        auto [lo, th] = bracket(t);
        Vec3 a = snaps_[lo].u.sample(x);
        if (th == 0.0) return a;
        Vec3 b = snaps_[lo + 1].u.sample(x);
        return (1.0 - th) * a + th * b;
    }

    double pressure(const Vec3& x, double t) const {
        auto [lo, th] = bracket(t);
        double a = snaps_[lo].p.sample(x);
        if (th == 0.0) return a;
        return (1.0 - th) * a + th * snaps_[lo + 1].p.sample(x);
    }

    double grad_sq(const Vec3& x, double t) const {
        auto [lo, th] = bracket(t);
        double a = snaps_[lo].grad_sq.sample(x);
        if (th == 0.0) return a;
        return (1.0 - th) * a + th * snaps_[lo + 1].grad_sq.sample(x);
    }

    /// Solver/loader invariant: spectral divergence below 1e-8 * max|u| on
    /// every snapshot. Not called on hand-built test fields.
    void validate_divergence() const {
        for (std::size_t i = 0; i < snaps_.size(); ++i) {
            const double umax = snaps_[i].u.max_abs();
            if (umax == 0.0) continue;
            ScalarField div = spectral::divergence(snaps_[i].u);
            if (div.max_abs() > 1e-8 * umax)
                throw ConfigError("snapshot " + std::to_string(i) + " violates the divergence invariant");
        }
    }

  private:
    Grid grid_;
    std::vector<double> times_;
    std::vector<Snapshot> snaps_;
    std::string provenance_;
};

/// Space-time rescaling of a trajectory about a base point, evaluated lazily.
/// Linear scale: u_r = u(x0 + r x, t0 + r^2 t),   P_r = r P(...).
/// Nonlinear scale: u_r = r u(...),               P_r = r^2 P(...).
template <class Field>
class RescaledView {
  public:
    RescaledView(const Field& base, SpacetimePoint origin, double r, double vel_scale, double p_scale)
        : base_(base), origin_(origin), r_(r), vel_scale_(vel_scale), p_scale_(p_scale) {}

    double box_length() const { return base_.box_length() / r_; }
    double time_begin() const { return (base_.time_begin() - origin_.t) / (r_ * r_); }
    double time_end() const { return (base_.time_end() - origin_.t) / (r_ * r_); }

    Vec3 map_x(const Vec3& x) const { return origin_.x + r_ * x; }
    double map_t(double t) const { return origin_.t + r_ * r_ * t; }

    Vec3 velocity(const Vec3& x, double t) const { return vel_scale_ * base_.velocity(map_x(x), map_t(t)); }
    double pressure(const Vec3& x, double t) const { return p_scale_ * base_.pressure(map_x(x), map_t(t)); }
    double grad_sq(const Vec3& x, double t) const {
        const double f = vel_scale_ * r_;
        return (f * f) * base_.grad_sq(map_x(x), map_t(t));
    }

  private:
    const Field& base_;
    SpacetimePoint origin_;
    double r_;
    double vel_scale_;
    double p_scale_;
};

namespace detail {

template <class Field>
inline void require_cylinder_available(const Field& f, const ParabolicCylinder& cyl) {
    require_ball_in_box(cyl.base.x, cyl.r, f.box_length());
    const double tol = 1e-9 * std::max(1.0, f.time_end() - f.time_begin());
    if (cyl.t_begin() < f.time_begin() - tol || cyl.t_end() > f.time_end() + tol)
        throw TimeRangeUnavailable("cylinder time range (" + std::to_string(cyl.t_begin()) + ", " +
                                   std::to_string(cyl.t_end()) + "] not covered by [" +
                                   std::to_string(f.time_begin()) + ", " + std::to_string(f.time_end()) + "]");
}

}  // namespace detail

/// Space-time p-average over Q_r of a pointwise value `eval(field, x, t)`.
/// Quadrature nodes are one canonical unit-cylinder point set mapped
/// affinely, so averages at different scales share sample geometry.
template <class Field, class Eval>
inline double cylinder_average_of(const Field& f, const ParabolicCylinder& cyl, double p,
                                  const SamplingPlan& plan, Eval&& eval) {
    plan.validate();
    detail::require_cylinder_available(f, cyl);
    auto nodes = unit_cylinder_points(plan.n_volume, plan.seed);
    double acc = 0.0;
    for (const CylinderNode& nd : nodes) {
        const Vec3 x = cyl.base.x + cyl.r * nd.x;
        const double t = cyl.base.t + cyl.r * cyl.r * nd.s;
        const double v = std::abs(eval(f, x, t));
        acc += (p == 1.0) ? v : std::pow(v, p);
    }
    return acc / static_cast<double>(nodes.size());
}

enum class CylField { velocity_magnitude, pressure };

/// Spec-facing entry point: p-average of |u| or |P| over a cylinder.
template <class Field>
inline double cylinder_average(const Field& f, const ParabolicCylinder& cyl, CylField which, double p,
                               const SamplingPlan& plan) {
    if (which == CylField::velocity_magnitude)
        return cylinder_average_of(f, cyl, p, plan,
                                   [](const Field& g, const Vec3& x, double t) { return norm(g.velocity(x, t)); });
    return cylinder_average_of(f, cyl, p, plan,
                               [](const Field& g, const Vec3& x, double t) { return g.pressure(x, t); });
}

/// Signed component-wise mean of u over a cylinder (the V_k surrogate).
template <class Field>
inline Vec3 cylinder_mean_velocity(const Field& f, const ParabolicCylinder& cyl, const SamplingPlan& plan) {
    plan.validate();
    detail::require_cylinder_available(f, cyl);
    auto nodes = unit_cylinder_points(plan.n_volume, plan.seed);
    Vec3 acc{0.0, 0.0, 0.0};
    for (const CylinderNode& nd : nodes) {
        const Vec3 x = cyl.base.x + cyl.r * nd.x;
        const double t = cyl.base.t + cyl.r * cyl.r * nd.s;
        acc = acc + f.velocity(x, t);
    }
    return (1.0 / static_cast<double>(nodes.size())) * acc;
}

}  // namespace nspr
