#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "nspr/solver.hpp"

using namespace nspr;
using namespace nspr::solver;
using Catch::Approx;

namespace {

double linf_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t q = 0; q < a.values().size(); ++q)
        m = std::max(m, std::abs(a.values()[q] - b.values()[q]));
    return m;
}

double linf_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (int d = 0; d < 3; ++d) m = std::max(m, linf_diff(a[d], b[d]));
    return m;
}

}  // namespace

TEST_CASE("leray projection") {
    Grid g(32);
    SECTION("solenoidal field passes through unchanged") {
        auto v = VectorField::from_function(g, [](const Vec3& x) { return Vec3{std::sin(x[1]), 0.0, 0.0}; });
        VectorField pv = leray_project(v);
        CHECK(linf_diff(pv, v) <= 1e-12);
    }
    SECTION("gradients are annihilated") {
        auto v = VectorField::from_function(g, [](const Vec3& x) { return Vec3{std::cos(x[0]), 0.0, 0.0}; });
        VectorField pv = leray_project(v);
        for (int d = 0; d < 3; ++d) CHECK(pv[d].max_abs() <= 1e-12);
    }
    SECTION("output is divergence free") {
        auto v = VectorField::from_function(g, [](const Vec3& x) {
            return Vec3{std::sin(x[0] + x[1]), std::cos(x[2]), std::sin(x[0]) * std::cos(x[1])};
        });
        VectorField pv = leray_project(v);
        CHECK(spectral::divergence(pv).max_abs() <= 1e-12 * std::max(1.0, pv.max_abs()));
    }
}

TEST_CASE("pressure recovery") {
    Grid g(32);
    SECTION("constant and zero velocities give zero pressure") {
        auto uc = VectorField::from_function(g, [](const Vec3&) { return Vec3{2.0, -1.0, 0.5}; });
        CHECK(compute_pressure(uc).max_abs() <= 1e-13);
        CHECK(compute_pressure(VectorField(g)).max_abs() == 0.0);
    }
    SECTION("taylor-green pressure, n=32") {
        analytic::TaylorGreen tg{1.0, 1.0, 0.0, 0.0};
        for (double t : {0.0, 0.3}) {
            VectorField u = tg.velocity_field(g, t);
            ScalarField p = compute_pressure(u);
            ScalarField p_exact = tg.pressure_field(g, t);
            CHECK(linf_diff(p, p_exact) <= 1e-6);
            CHECK(std::abs(p.mean()) <= 1e-14);
        }
    }
    SECTION("phase-shifted taylor-green pressure") {
        analytic::TaylorGreen tg{0.7, 1.0, 1.0, 2.0};
        VectorField u = tg.velocity_field(g, 0.1);
        ScalarField p = compute_pressure(u);
        CHECK(linf_diff(p, tg.pressure_field(g, 0.1)) <= 1e-6);
    }
}

TEST_CASE("time stepping") {
    SECTION("zero initial data stays zero") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.t_end = 0.02;
        cfg.dt = 1e-3;
        cfg.init.kind = InitSpec::Kind::zero;
        Trajectory traj = run(cfg);
        for (std::size_t i = 0; i < traj.snapshot_count(); ++i)
            CHECK(traj.snapshot(i).u.max_abs() == 0.0);
    }
    SECTION("taylor-green is integrated to solver accuracy") {
        SolverConfig cfg;
        cfg.n = 32;
        cfg.dt = 1e-3;
        cfg.t_end = 0.1;
        cfg.snapshot_stride = 100;
        cfg.init.kind = InitSpec::Kind::taylor_green;
        Trajectory traj = run(cfg);
        analytic::TaylorGreen tg{1.0, 1.0, 0.0, 0.0};
        Grid g = traj.grid();
        const auto& last = traj.snapshot(traj.snapshot_count() - 1);
        CHECK(traj.times().back() == Approx(0.1));
        CHECK(linf_diff(last.u, tg.velocity_field(g, 0.1)) <= 1e-4);
        CHECK(linf_diff(last.p, tg.pressure_field(g, 0.1)) <= 1e-5);
    }
    SECTION("divergence invariant holds on a random run") {
        SolverConfig cfg;
        cfg.n = 32;
        cfg.dt = 1e-3;
        cfg.t_end = 0.03;
        cfg.snapshot_stride = 10;
        cfg.init.kind = InitSpec::Kind::random_divfree;
        cfg.init.seed = 7;
        cfg.init.amplitude = 1.0;
        Trajectory traj = run(cfg);
        CHECK_NOTHROW(traj.validate_divergence());
        for (std::size_t i = 0; i < traj.snapshot_count(); ++i) {
            const auto& s = traj.snapshot(i);
            CHECK(spectral::divergence(s.u).max_abs() <= 1e-8 * std::max(1e-30, s.u.max_abs()));
            CHECK(std::abs(s.p.mean()) <= 1e-13);
        }
    }
    SECTION("reproducibility: identical configs give identical trajectories") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 2e-3;
        cfg.t_end = 0.02;
        cfg.init.kind = InitSpec::Kind::random_divfree;
        cfg.init.seed = 13;
        Trajectory a = run(cfg);
        Trajectory b = run(cfg);
        const auto& ua = a.snapshot(a.snapshot_count() - 1).u;
        const auto& ub = b.snapshot(b.snapshot_count() - 1).u;
        for (int d = 0; d < 3; ++d)
            for (std::size_t q = 0; q < ua[d].values().size(); ++q)
                REQUIRE(ua[d].values()[q] == ub[d].values()[q]);
    }
    SECTION("cfl violation is reported with the offending velocity") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 0.5;  // far beyond 0.5 h / max|u|
        cfg.t_end = 0.5;
        cfg.init.kind = InitSpec::Kind::taylor_green;
        cfg.init.amplitude = 2.0;
        try {
            run(cfg);
            FAIL("expected CflViolation");
        } catch (const CflViolation& e) {
            CHECK(e.max_velocity == Approx(2.0).epsilon(0.05));
        }
    }
}

TEST_CASE("rk2 order via 3d taylor-green self-convergence") {
    auto final_u = [](double dt) {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = dt;
        cfg.t_end = 0.04;
        cfg.snapshot_stride = 1 << 20;  // only first and last
        cfg.init.kind = InitSpec::Kind::taylor_green3d;
        cfg.init.amplitude = 1.0;
        Trajectory t = run(cfg);
        return t.snapshot(t.snapshot_count() - 1).u;
    };
    VectorField ref = final_u(2.5e-4);
    const double e1 = linf_diff(final_u(2e-3), ref);
    const double e2 = linf_diff(final_u(1e-3), ref);
    const double ratio = e1 / e2;
    INFO("errors " << e1 << " " << e2 << " ratio " << ratio);
    CHECK(ratio >= 4.0 * 0.7);
    CHECK(ratio <= 4.0 * 1.3);
}

TEST_CASE("discrete energy balance per step") {
    SolverConfig cfg;
    cfg.n = 16;
    cfg.dt = 2e-4;
    cfg.t_end = 10 * cfg.dt;
    cfg.snapshot_stride = 1;
    cfg.init.kind = InitSpec::Kind::random_divfree;
    cfg.init.seed = 3;
    cfg.init.amplitude = 0.5;
    Trajectory traj = run(cfg);
    Grid g = traj.grid();
    const double cell = std::pow(g.spacing(), 3);
    auto energy = [&](const Snapshot& s) {
        double e = 0.0;
        for (int d = 0; d < 3; ++d)
            for (double v : s.u[d].values()) e += v * v;
        return 0.5 * e * cell;
    };
    auto dissipation = [&](const Snapshot& s) {
        double e = 0.0;
        for (double v : s.grad_sq.values()) e += v;
        return e * cell;
    };
    for (std::size_t i = 0; i + 1 < traj.snapshot_count(); ++i) {
        const double dE = (energy(traj.snapshot(i + 1)) - energy(traj.snapshot(i))) / cfg.dt;
        const double diss = 0.5 * (dissipation(traj.snapshot(i)) + dissipation(traj.snapshot(i + 1)));
        CHECK(std::abs(dE + cfg.viscosity * diss) <= 1e-6 * diss);
    }
}
