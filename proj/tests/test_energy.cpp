#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "nspr/energy.hpp"
#include "nspr/solver.hpp"

using namespace nspr;
using namespace nspr::energy;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const Vec3 kCenter{kPi, kPi, kPi};

Trajectory tg_run(int n = 32, double t_end = 0.1, int stride = 2) {
    solver::SolverConfig cfg;
    cfg.n = n;
    cfg.dt = 1e-3;
    cfg.t_end = t_end;
    cfg.snapshot_stride = stride;
    cfg.init.kind = solver::InitSpec::Kind::taylor_green;
    return solver::run(cfg);
}

Trajectory random_run(std::uint64_t seed, int n = 32, double t_end = 0.1, int stride = 2) {
    solver::SolverConfig cfg;
    cfg.n = n;
    cfg.dt = 1e-3;
    cfg.t_end = t_end;
    cfg.snapshot_stride = stride;
    cfg.init.kind = solver::InitSpec::Kind::random_divfree;
    cfg.init.seed = seed;
    cfg.init.amplitude = 0.5;
    return solver::run(cfg);
}

}  // namespace

TEST_CASE("bump test function") {
    Grid g(32);
    TestFunction phi{{kCenter, 0.05}, 1.2, 0.03, 2.0};

    SECTION("nonnegative with compact support") {
        CHECK(phi.value(kCenter, 0.05, g) == Approx(2.0 / std::exp(2.0)));
        CHECK(phi.value(kCenter + Vec3{1.2, 0, 0}, 0.05, g) == 0.0);
        CHECK(phi.value(kCenter, 0.05 + 0.03, g) == 0.0);
        CHECK(phi.value(kCenter + Vec3{0.5, 0.3, -0.2}, 0.06, g) >= 0.0);
    }
    SECTION("derivatives match central differences") {
        const Vec3 x = kCenter + Vec3{0.4, -0.25, 0.3};
        const double t = 0.058;
        const double eps = 1e-5;
        // time derivative
        const double dt_num = (phi.value(x, t + eps, g) - phi.value(x, t - eps, g)) / (2 * eps);
        CHECK(phi.time_derivative(x, t, g) == Approx(dt_num).epsilon(1e-5).margin(1e-10));
        // gradient
        Vec3 grad = phi.gradient(x, t, g);
        for (int d = 0; d < 3; ++d) {
            Vec3 xp = x, xm = x;
            xp[d] += eps;
            xm[d] -= eps;
            const double gn = (phi.value(xp, t, g) - phi.value(xm, t, g)) / (2 * eps);
            CHECK(grad[d] == Approx(gn).epsilon(1e-5).margin(1e-10));
        }
        // laplacian
        double lap_num = 0.0;
        for (int d = 0; d < 3; ++d) {
            Vec3 xp = x, xm = x;
            xp[d] += eps;
            xm[d] -= eps;
            lap_num += (phi.value(xp, t, g) - 2 * phi.value(x, t, g) + phi.value(xm, t, g)) / (eps * eps);
        }
        CHECK(phi.laplacian(x, t, g) == Approx(lap_num).epsilon(1e-4).margin(1e-8));
    }
}

TEST_CASE("local energy inequality") {
    SECTION("zero field: zero slack") {
        solver::SolverConfig cfg;
        cfg.n = 16;
        cfg.t_end = 0.05;
        cfg.dt = 1e-3;
        cfg.snapshot_stride = 5;
        cfg.init.kind = solver::InitSpec::Kind::zero;
        Trajectory traj = solver::run(cfg);
        TestFunction phi{{kCenter, 0.03}, 1.0, 0.02};
        auto res = check_energy_inequality(traj, phi, 0.05);
        CHECK(res.slack == 0.0);
        CHECK(res.lhs_kinetic == 0.0);
    }
    SECTION("taylor-green: equality up to discretization") {
        Trajectory traj = tg_run();
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            TestFunction phi{{kCenter + Vec3{0.2 * seed, 0.1 * seed, 0.0}, 0.06}, 1.0 + 0.2 * seed, 0.04};
            auto res = check_energy_inequality(traj, phi, 0.1);
            INFO("bump " << seed << " slack " << res.slack << " scale " << res.term_scale);
            CHECK(std::abs(res.slack) <= 1e-3 * res.term_scale);
        }
    }
    SECTION("random solenoidal run dissipates correctly") {
        Trajectory traj = random_run(11);
        TestFunction phi{{kCenter, 0.06}, 1.4, 0.05};
        auto res = check_energy_inequality(traj, phi, 0.1);
        CHECK(res.slack >= -1e-3 * res.term_scale);
    }
    SECTION("support validation") {
        Trajectory traj = tg_run(16, 0.02, 5);
        TestFunction early{{kCenter, 0.005}, 1.0, 0.02};  // starts before t=0
        CHECK_THROWS_AS(check_energy_inequality(traj, early, 0.02), SupportOutOfDomain);
        TestFunction wide{{kCenter, 0.015}, 4.0, 0.01};  // wider than the box
        CHECK_THROWS_AS(check_energy_inequality(traj, wide, 0.02), SupportOutOfDomain);
        TestFunction ok{{kCenter, 0.015}, 1.0, 0.01};
        CHECK_THROWS_AS(check_energy_inequality(traj, ok, 0.0171), SupportOutOfDomain);  // not a snapshot
    }
}

TEST_CASE("local energy estimate") {
    SamplingPlan plan{20000, 1024, 0};
    SECTION("zero field: both sides vanish") {
        solver::SolverConfig cfg;
        cfg.n = 16;
        cfg.t_end = 0.05;
        cfg.dt = 1e-3;
        cfg.init.kind = solver::InitSpec::Kind::zero;
        Trajectory traj = solver::run(cfg);
        auto rep = check_local_energy_estimate(traj, {kCenter, 0.05}, 0.2, plan);
        CHECK(rep.lhs == 0.0);
        CHECK(rep.rhs == 0.0);
        CHECK_FALSE(rep.degenerate);
    }
    SECTION("taylor-green: finite fitted constant, stable across resolution") {
        auto c_at = [&](int n) {
            Trajectory traj = tg_run(n, 0.1, 5);
            auto rep = check_local_energy_estimate(traj, {kCenter + Vec3{1.0, 0.5, 0.0}, 0.09}, 0.25, plan);
            REQUIRE(std::isfinite(rep.fitted_c));
            REQUIRE_FALSE(rep.degenerate);
            return rep.fitted_c;
        };
        const double c32 = c_at(32), c64 = c_at(64);
        CHECK(std::abs(c64 - c32) <= 0.5 * std::max(c32, c64));
    }
    SECTION("amplitude sweep shows the inequality's inhomogeneity") {
        // lhs ~ alpha^2 while rhs ~ alpha^3, so fitted C ~ 1/alpha
        auto c_amp = [&](double amp) {
            solver::SolverConfig cfg;
            cfg.n = 32;
            cfg.dt = 5e-4;
            cfg.t_end = 0.1;
            cfg.snapshot_stride = 10;
            cfg.init.kind = solver::InitSpec::Kind::taylor_green;
            cfg.init.amplitude = amp;
            Trajectory traj = solver::run(cfg);
            return check_local_energy_estimate(traj, {kCenter + Vec3{1.0, 0.5, 0.0}, 0.09}, 0.25, plan).fitted_c;
        };
        const double c1 = c_amp(0.5), c2 = c_amp(1.0);
        CHECK(c2 / c1 == Approx(0.5).epsilon(0.25));
    }
}

TEST_CASE("L^{10/3} interpolation bound") {
    SamplingPlan plan{20000, 1024, 0};
    SECTION("zero field: both sides zero") {
        solver::SolverConfig cfg;
        cfg.n = 16;
        cfg.t_end = 0.05;
        cfg.dt = 1e-3;
        cfg.init.kind = solver::InitSpec::Kind::zero;
        Trajectory traj = solver::run(cfg);
        auto rep = check_l103(traj, {kCenter, 0.04}, 0.15, plan);
        CHECK(rep.lhs_norm == 0.0);
        CHECK(rep.fitted_c == 0.0);
    }
    SECTION("constant velocity: lhs = |c| |Q_R|^{3/10}") {
        Grid g(32);
        auto u = VectorField::from_function(g, [](const Vec3&) { return Vec3{0.8, 0.0, 0.6}; });
        ScalarField p(g, 0.0);
        std::vector<Snapshot> snaps;
        snaps.push_back(make_snapshot(u, p));
        snaps.push_back(make_snapshot(u, p));
        Trajectory traj(g, {0.0, 0.3}, std::move(snaps));
        const double R = 0.3;
        auto rep = check_l103(traj, {kCenter, 0.25}, R, plan);
        CHECK(rep.lhs_norm == Approx(1.0 * std::pow(cylinder_volume(R), 0.3)).epsilon(1e-6));
    }
    SECTION("taylor-green: finite stable constant") {
        auto c_at = [&](int n) {
            Trajectory traj = tg_run(n, 0.1, 5);
            return check_l103(traj, {kCenter + Vec3{1.0, 0.5, 0.0}, 0.09}, 0.25, plan).fitted_c;
        };
        const double c32 = c_at(32), c64 = c_at(64);
        REQUIRE(std::isfinite(c32));
        CHECK(std::abs(c64 - c32) <= 0.5 * std::max(c32, c64));
    }
}
