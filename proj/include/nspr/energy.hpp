#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nspr/trajectory.hpp"

namespace nspr {
namespace energy {

namespace detail {

/// B(q) = exp(-1/(1-q)) on q < 1, 0 beyond; written in q = (dist/radius)^2
/// so all derivatives stay smooth through the center.
inline double bump_b(double q) { return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0; }

/// dB/dq = -B/(1-q)^2 (B decreases in q).
inline double bump_b1(double q) {
    if (q >= 1.0) return 0.0;
    const double im = 1.0 / (1.0 - q);
    return -bump_b(q) * im * im;
}

/// d2B/dq2 = B [ (1-q)^-4 - 2 (1-q)^-3 ].
inline double bump_b2(double q) {
    if (q >= 1.0) return 0.0;
    const double im = 1.0 / (1.0 - q);
    return bump_b(q) * (im * im * im * im - 2.0 * im * im * im);
}

}  // namespace detail

/// Nonnegative C-infinity space-time bump, compactly supported in
/// B_rho(xc) x (tc - tau, tc + tau); all derivatives analytic.
struct TestFunction {
    SpacetimePoint center;
    double space_radius = 1.0;
    double time_radius = 0.1;
    double amplitude = 1.0;

    double space_q(const Vec3& x, const Grid& g) const {
        Vec3 d = g.min_image(x, center.x);
        return dot(d, d) / (space_radius * space_radius);
    }
    double time_q(double t) const {
        const double s = (t - center.t) / time_radius;
        return s * s;
    }

    double value(const Vec3& x, double t, const Grid& g) const {
        return amplitude * detail::bump_b(space_q(x, g)) * detail::bump_b(time_q(t));
    }
    double time_derivative(const Vec3& x, double t, const Grid& g) const {
        const double qt = time_q(t);
        return amplitude * detail::bump_b(space_q(x, g)) * detail::bump_b1(qt) *
               (2.0 * (t - center.t) / (time_radius * time_radius));
    }
    Vec3 gradient(const Vec3& x, double t, const Grid& g) const {
        Vec3 d = g.min_image(x, center.x);
        const double qs = dot(d, d) / (space_radius * space_radius);
        const double f = amplitude * detail::bump_b1(qs) * (2.0 / (space_radius * space_radius)) *
                         detail::bump_b(time_q(t));
        return f * d;
    }
    double laplacian(const Vec3& x, double t, const Grid& g) const {
        Vec3 d = g.min_image(x, center.x);
        const double r2 = space_radius * space_radius;
        const double qs = dot(d, d) / r2;
        const double lap_s =
            detail::bump_b1(qs) * (6.0 / r2) + detail::bump_b2(qs) * (4.0 * dot(d, d) / (r2 * r2));
        return amplitude * lap_s * detail::bump_b(time_q(t));
    }
};

struct EnergySlack {
    double lhs_kinetic = 0.0;     // int |u|^2 phi at the evaluation time
    double lhs_dissipation = 0.0; // 2 nu int_0^t int |Du|^2 phi
    double rhs = 0.0;
    double slack = 0.0;           // rhs - lhs; >= 0 means the inequality holds
    double term_scale = 0.0;
};

/// Localized energy inequality of a suitable pair evaluated at a snapshot
/// time: grid sums in space, trapezoid in time. For smooth resolved
/// solutions this is an equality up to discretization error.
inline EnergySlack check_energy_inequality(const Trajectory& traj, const TestFunction& phi,
                                           double t_eval, double viscosity = 1.0) {
    const Grid& g = traj.grid();
    if (phi.space_radius >= 0.5 * g.box_length())
        throw SupportOutOfDomain("bump spatial support does not fit in the box");
    const double tol = 1e-9 * std::max(1.0, traj.time_end() - traj.time_begin());
    if (phi.center.t - phi.time_radius < traj.time_begin() - tol)
        throw SupportOutOfDomain("bump time support starts before the trajectory");
    // t_eval must be one of the snapshot times
    std::size_t idx = traj.snapshot_count();
    for (std::size_t i = 0; i < traj.snapshot_count(); ++i)
        if (std::abs(traj.times()[i] - t_eval) <= tol) idx = i;
    if (idx == traj.snapshot_count())
        throw SupportOutOfDomain("t_eval is not a snapshot time");

    const int n = g.n();
    const double cell = std::pow(g.spacing(), 3);
    auto space_sums = [&](std::size_t si, double& diss, double& rhs) {
        const Snapshot& s = traj.snapshot(si);
        const double t = traj.times()[si];
        double acc_d = 0.0, acc_r = 0.0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const Vec3 x = g.node(i, j, k);
                    const double qf = phi.value(x, t, g);
                    const double u1 = s.u[0](i, j, k), u2 = s.u[1](i, j, k), u3 = s.u[2](i, j, k);
                    const double uu = u1 * u1 + u2 * u2 + u3 * u3;
                    if (qf > 0.0) acc_d += s.grad_sq(i, j, k) * qf;
                    const double pt = phi.time_derivative(x, t, g);
                    const double lp = phi.laplacian(x, t, g);
                    const Vec3 gr = phi.gradient(x, t, g);
                    if (pt != 0.0 || lp != 0.0 || gr[0] != 0.0 || gr[1] != 0.0 || gr[2] != 0.0) {
                        const double udotg = u1 * gr[0] + u2 * gr[1] + u3 * gr[2];
                        acc_r += uu * (pt + viscosity * lp) + (uu + 2.0 * s.p(i, j, k)) * udotg;
                    }
                }
        diss = acc_d * cell;
        rhs = acc_r * cell;
    };

    std::vector<double> diss(idx + 1), rhs(idx + 1);
    for (std::size_t i = 0; i <= idx; ++i) space_sums(i, diss[i], rhs[i]);

    auto trapezoid = [&](const std::vector<double>& f) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 <= idx; ++i)
            acc += 0.5 * (f[i] + f[i + 1]) * (traj.times()[i + 1] - traj.times()[i]);
        return acc;
    };

    EnergySlack out;
    {
        const Snapshot& s = traj.snapshot(idx);
        double acc = 0.0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const double qf = phi.value(g.node(i, j, k), t_eval, g);
                    if (qf == 0.0) continue;
                    const double u1 = s.u[0](i, j, k), u2 = s.u[1](i, j, k), u3 = s.u[2](i, j, k);
                    acc += (u1 * u1 + u2 * u2 + u3 * u3) * qf;
                }
        out.lhs_kinetic = acc * cell;
    }
    out.lhs_dissipation = 2.0 * viscosity * trapezoid(diss);
    out.rhs = trapezoid(rhs);
    out.slack = out.rhs - out.lhs_kinetic - out.lhs_dissipation;
    out.term_scale = std::max({out.lhs_kinetic, out.lhs_dissipation, std::abs(out.rhs), 1e-300});
    return out;
}

struct LocalEnergyReport {
    double sup_kinetic = 0.0;   // sup_t int_{B_{3R/4}} |u|^2
    double grad_average = 0.0;  // cylinder average of |Du|^2 over Q_{3R/4}
    double lhs = 0.0;
    double rhs = 0.0;           // int_{Q_R} (|u|^3 + |P|^{3/2})
    double fitted_c = 0.0;
    bool degenerate = false;    // rhs under the floor while lhs is not
};

/// Local energy estimate on the pair Q_{3R/4} inside Q_R, as displayed in
/// the paper (sup term and rhs are plain integrals, the gradient term is an
/// average). The sup runs over snapshot times inside the inner cylinder.
inline LocalEnergyReport check_local_energy_estimate(const Trajectory& traj, const SpacetimePoint& base,
                                                     double R, const SamplingPlan& plan) {
    const double inner = 0.75 * R;
    ParabolicCylinder outer{base, R};
    ParabolicCylinder inner_cyl{base, inner};
    nspr::detail::require_cylinder_available(traj, outer);

    LocalEnergyReport rep;
    for (std::size_t i = 0; i < traj.snapshot_count(); ++i) {
        const double t = traj.times()[i];
        if (t < inner_cyl.t_begin() || t > inner_cyl.t_end()) continue;
        const Snapshot& s = traj.snapshot(i);
        const double avg =
            ball_average_of([&](const Vec3& x) { return norm(s.u.sample(x)); }, base.x, inner, 2.0, plan);
        rep.sup_kinetic = std::max(rep.sup_kinetic, avg * ball_volume(inner));
    }
    rep.grad_average = cylinder_average_of(
        traj, inner_cyl, 1.0, plan, [](const Trajectory& f, const Vec3& x, double t) { return f.grad_sq(x, t); });
    rep.lhs = rep.sup_kinetic + rep.grad_average;
    const double u3 = cylinder_average(traj, outer, CylField::velocity_magnitude, 3.0, plan);
    const double p32 = cylinder_average(traj, outer, CylField::pressure, 1.5, plan);
    rep.rhs = (u3 + p32) * cylinder_volume(R);
    rep.degenerate = rep.rhs < 1e-12 && rep.lhs > 1e-6;
    rep.fitted_c = rep.degenerate ? std::numeric_limits<double>::infinity()
                                  : (rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0);
    return rep;
}

struct L103Report {
    double lhs_norm = 0.0;   // ||u||_{L^{10/3}(Q_R)}
    double sup_l2 = 0.0;     // sup_t ||u(t)||_{L^2(B_R)}
    double l2h1 = 0.0;       // ||u||_{L^2 H^1(Q_R)}
    double fitted_c = 0.0;
};

/// Space-time interpolation bound behind u in L^{10/3}: the exponent pair
/// (2/5, 3/5) solves 1/p = theta/inf + (1-theta)/2 with theta = 2/5.
inline L103Report check_l103(const Trajectory& traj, const SpacetimePoint& base, double R,
                             const SamplingPlan& plan) {
    ParabolicCylinder cyl{base, R};
    nspr::detail::require_cylinder_available(traj, cyl);
    L103Report rep;
    const double vol = cylinder_volume(R);
    const double u103 = cylinder_average(traj, cyl, CylField::velocity_magnitude, 10.0 / 3.0, plan);
    rep.lhs_norm = std::pow(u103 * vol, 0.3);
    for (std::size_t i = 0; i < traj.snapshot_count(); ++i) {
        const double t = traj.times()[i];
        if (t < cyl.t_begin() || t > cyl.t_end()) continue;
        const Snapshot& s = traj.snapshot(i);
        const double avg =
            ball_average_of([&](const Vec3& x) { return norm(s.u.sample(x)); }, base.x, R, 2.0, plan);
        rep.sup_l2 = std::max(rep.sup_l2, std::sqrt(avg * ball_volume(R)));
    }
    const double u2 = cylinder_average(traj, cyl, CylField::velocity_magnitude, 2.0, plan);
    const double du2 = cylinder_average_of(
        traj, cyl, 1.0, plan, [](const Trajectory& f, const Vec3& x, double t) { return f.grad_sq(x, t); });
    rep.l2h1 = std::sqrt((u2 + du2) * vol);
    const double bound = std::pow(rep.sup_l2, 0.4) * std::pow(rep.l2h1, 0.6);
    rep.fitted_c = bound > 0.0 ? rep.lhs_norm / bound : 0.0;
    return rep;
}

}  // namespace energy
}  // namespace nspr
