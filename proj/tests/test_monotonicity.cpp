#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "nspr/monotonicity.hpp"

using namespace nspr;
using namespace nspr::monotonicity;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const Vec3 kCenter{kPi, kPi, kPi};
const SamplingPlan kPlan{20000, 4096, 0};

}  // namespace

TEST_CASE("harmonic monotonicity") {
    Grid g(64);
    std::vector<double> radii{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

    SECTION("constant field: both sequences constantly |c|^p") {
        ScalarField u(g, 1.0);
        auto rep = verify_harmonic(u, kCenter, 3.0, radii, kPlan);
        REQUIRE(rep.pass);
        for (const auto& row : rep.rows) {
            CHECK(row.lhs == Approx(1.0).margin(1e-13));
            CHECK(row.rhs1 == Approx(1.0).margin(1e-13));
        }
    }
    SECTION("u = x1, p = 2: closed-form sequences r^2/5 and r^2/3") {
        auto u = ScalarField::from_function(g, [](const Vec3& x) { return x[0] - kPi; });
        auto rep = verify_harmonic(u, kCenter, 2.0, radii, kPlan);
        REQUIRE(rep.pass);
        for (const auto& row : rep.rows) {
            CHECK(row.lhs == Approx(row.r * row.r / 5.0).epsilon(1e-2));
            CHECK(row.rhs1 == Approx(row.r * row.r / 3.0).epsilon(1e-2));
        }
        for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].margin > 0.0);
    }
    SECTION("u = x1 x2, p = 2: increasing, ball values r^4/35") {
        auto u = ScalarField::from_function(g, [](const Vec3& x) { return (x[0] - kPi) * (x[1] - kPi); });
        auto rep = verify_harmonic(u, kCenter, 2.0, radii, kPlan);
        REQUIRE(rep.pass);
        for (const auto& row : rep.rows)
            CHECK(row.lhs == Approx(std::pow(row.r, 4) / 35.0).epsilon(3e-2));
    }
    SECTION("degree <= 3 seeded corpus passes for p in {1,2,3}") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            for (double p : {1.0, 2.0, 3.0}) {
                auto rep = harmonic_trial(seed, 64, p, kPlan);
                INFO("seed " << seed << " p " << p);
                CHECK(rep.pass);
            }
        }
    }
    SECTION("harmonicity residual guard") {
        auto bad = ScalarField::from_function(g, [](const Vec3& x) { return std::sin(x[0]); });
        CHECK_THROWS_AS(verify_harmonic(bad, kCenter, 2.0, radii, kPlan, 1e-4, true), NotHarmonic);
        ScalarField ok(g, 2.0);
        CHECK_NOTHROW(verify_harmonic(ok, kCenter, 2.0, radii, kPlan, 1e-4, true));
    }
    SECTION("p below 1 is rejected") {
        ScalarField u(g, 1.0);
        CHECK_THROWS_AS(verify_harmonic(u, kCenter, 0.5, radii, kPlan), ConfigError);
    }
}

TEST_CASE("inhomogeneous monotonicity, div^2 form") {
    Grid g(32);
    const double r0 = 0.625;

    SECTION("zero G reduces to the harmonic lemma: C1 <= 1 + tol, C2 = 0") {
        auto hp = analytic::random_harmonic(4, 2, kCenter);
        auto rep = verify_inhom_b(hp, SymTensorField(g), 2.0, default_radii(), kCenter, r0, kPlan);
        REQUIRE(rep.pass);
        CHECK(rep.c1 <= 1.0 + 2e-2);
        CHECK(rep.c2 == 0.0);
    }
    SECTION("manufactured u = r0^2 - |x|^2 rows match closed forms") {
        Grid g64(64);  // quadratic fields carry an h^2 sampling bias
        SymTensorField G(g64);
        auto neg_r2 = ScalarField::from_function(g64, [&](const Vec3& x) {
            Vec3 d = g64.min_image(x, kCenter);
            return -dot(d, d);
        });
        for (int a = 0; a < 3; ++a) G(a, a) = neg_r2;
        analytic::HarmonicPolynomial zero;
        zero.center = kCenter;
        auto rep = verify_inhom_b(zero, G, 2.0, default_radii(), kCenter, r0, kPlan);
        REQUIRE(rep.pass);
        for (const auto& row : rep.rows) {
            const double R = row.r * r0;
            const double want = std::pow(r0, 4) - 1.2 * r0 * r0 * R * R + (3.0 / 7.0) * std::pow(R, 4);
            CHECK(row.lhs == Approx(want).epsilon(3e-2));
        }
        // rhs2 carries (1/r^3) * avg of the Frobenius norm^2 = 3 rho^4
        const double g_avg = 3.0 * (3.0 / 7.0) * std::pow(r0, 4);
        CHECK(rep.rows.back().rhs2 == Approx(g_avg).epsilon(6e-2));
    }
    SECTION("seeded corpus gives finite constants and nonnegative margins") {
        for (std::uint64_t seed : {10ull, 11ull}) {
            for (double p : {1.5, 2.0}) {
                auto rep = inhom_b_trial(seed, 32, p, kPlan);
                INFO("seed " << seed << " p " << p);
                CHECK(rep.pass);
                CHECK(std::isfinite(rep.c1));
                CHECK(std::isfinite(rep.c2));
            }
        }
    }
    SECTION("scaling covariance: alpha u leaves fitted constants unchanged") {
        const double alpha = 3.0;
        auto hp = analytic::random_harmonic(21, 2, kCenter);
        SymTensorField G = random_tensor(21, g);
        auto hp_scaled = hp;
        for (auto& c : hp_scaled.coeff) c *= alpha;
        SymTensorField G_scaled(g);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                G_scaled(a, b) = G(a, b);
                for (auto& v : G_scaled(a, b).values()) v *= alpha;
            }
        auto rep = verify_inhom_b(hp, G, 2.0, default_radii(), kCenter, r0, kPlan);
        auto rep_s = verify_inhom_b(hp_scaled, G_scaled, 2.0, default_radii(), kCenter, r0, kPlan);
        CHECK(rep_s.c1 == Approx(rep.c1).epsilon(1e-6));
        CHECK(rep_s.c2 == Approx(rep.c2).epsilon(1e-6).margin(1e-12));
        for (std::size_t i = 0; i < rep.rows.size(); ++i)
            CHECK(rep_s.rows[i].lhs == Approx(std::pow(alpha, 2.0) * rep.rows[i].lhs).epsilon(1e-10));
    }
    SECTION("p = 1 is rejected for the div^2 form") {
        analytic::HarmonicPolynomial zero;
        CHECK_THROWS_AS(verify_inhom_b(zero, SymTensorField(g), 1.0, default_radii(), kCenter, r0, kPlan),
                        ConfigError);
    }
}

TEST_CASE("inhomogeneous monotonicity, div form") {
    Grid g(32);
    const double r0 = 0.625;

    SECTION("zero F: homogeneous reduction") {
        auto hp = analytic::random_harmonic(8, 2, kCenter);
        auto rep = verify_inhom_a(hp, VectorField(g), 2.0, 2.0, default_radii(), kCenter, r0, kPlan);
        REQUIRE(rep.pass);
        CHECK(rep.c1 <= 1.0 + 2e-2);
    }
    SECTION("manufactured radial F rows match closed forms") {
        Grid g64(64);
        auto F = VectorField::from_function(g64, [&](const Vec3& x) { return g64.min_image(x, kCenter); });
        analytic::HarmonicPolynomial zero;
        zero.center = kCenter;
        auto rep = verify_inhom_a(zero, F, 2.0, 2.0, default_radii(), kCenter, r0, kPlan);
        REQUIRE(rep.pass);
        for (const auto& row : rep.rows) {
            const double R = row.r * r0;
            const double want =
                0.25 * (std::pow(r0, 4) - 1.2 * r0 * r0 * R * R + (3.0 / 7.0) * std::pow(R, 4));
            CHECK(row.lhs == Approx(want).epsilon(3e-2));
        }
    }
    SECTION("representative exponent pairs q=2, p in {2,3,6}") {
        for (double p : {2.0, 3.0, 6.0}) {
            auto rep = inhom_a_trial(31, 32, 2.0, p, kPlan);
            INFO("p " << p);
            CHECK(rep.pass);
            CHECK(std::isfinite(rep.c1));
            CHECK(std::isfinite(rep.c2));
        }
    }
    SECTION("exponent validation") {
        analytic::HarmonicPolynomial zero;
        CHECK_THROWS_AS(verify_inhom_a(zero, VectorField(g), 3.0, 2.0, default_radii(), kCenter, r0, kPlan),
                        ConfigError);
        CHECK_THROWS_AS(verify_inhom_a(zero, VectorField(g), 2.0, 6.5, default_radii(), kCenter, r0, kPlan),
                        ConfigError);
    }
}

TEST_CASE("interpolated monotonicity") {
    const double r0 = 0.625;

    SECTION("constant u: gradient term zero, C1 = 1 suffices") {
        auto rep = verify_interpolated_of([](const Vec3&) { return -2.0; }, [](const Vec3&) { return 0.0; },
                                          kCenter, r0, default_radii(), kPlan);
        REQUIRE(rep.pass);
        CHECK(rep.c1 == Approx(1.0).epsilon(1e-12));
        CHECK(rep.c2 == 0.0);
        for (const auto& row : rep.rows) CHECK(row.lhs == Approx(8.0).margin(1e-12));
    }
    SECTION("u = x1: closed-form rows") {
        auto rep = verify_interpolated_of([](const Vec3& x) { return x[0] - kPi; },
                                          [](const Vec3&) { return 1.0; }, kCenter, r0, default_radii(), kPlan);
        REQUIRE(rep.pass);
        for (const auto& row : rep.rows) {
            const double R = row.r * r0;
            CHECK(row.lhs == Approx(R * R * R / 8.0).epsilon(5e-3));
        }
        // rhs2 r^3 = sqrt(int_{B_{3/4}} |u(r0 x)|^2) * int_{B_1} |Du(r0 x)|^2
        const double u2_int = (0.75 * r0) * (0.75 * r0) / 5.0 * ball_volume(0.75);
        const double du2_int = r0 * r0 * ball_volume(1.0);
        const double want = std::sqrt(u2_int) * du2_int;
        CHECK(rep.rows.back().rhs2 == Approx(want).epsilon(5e-3));
    }
    SECTION("trig field: finite constants, stable across n in {32, 64}") {
        auto r32 = interpolated_trial(5, 32, kPlan);
        auto r64 = interpolated_trial(5, 64, kPlan);
        REQUIRE(r32.pass);
        REQUIRE(r64.pass);
        CHECK(std::abs(r64.c1 - r32.c1) <= 0.5 * std::max(r32.c1, r64.c1));
        CHECK(std::abs(r64.c2 - r32.c2) <= 0.5 * std::max({r32.c2, r64.c2, 1e-12}));
    }
    SECTION("spec example field sin(2x)sin(2y)sin(2z)") {
        Grid g(32);
        auto u = ScalarField::from_function(
            g, [](const Vec3& x) { return std::sin(2 * x[0]) * std::sin(2 * x[1]) * std::sin(2 * x[2]); });
        auto rep = verify_interpolated(u, kCenter, r0, default_radii(), kPlan);
        CHECK(rep.pass);
        CHECK(std::isfinite(rep.c1));
        CHECK(std::isfinite(rep.c2));
    }
}

TEST_CASE("fitted constants vs quadrature resolution") {
    // medians over seeds should not increase as n_volume grows (10% band)
    std::vector<int> budgets{4000, 16000, 64000};
    std::vector<double> med_c1, med_c2;
    for (int nv : budgets) {
        std::vector<double> c1s, c2s;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            SamplingPlan plan{nv, 2048, seed};
            auto rep = inhom_b_trial(100 + seed, 32, 2.0, plan);
            c1s.push_back(rep.c1);
            c2s.push_back(rep.c2);
        }
        std::sort(c1s.begin(), c1s.end());
        std::sort(c2s.begin(), c2s.end());
        med_c1.push_back(c1s[2]);
        med_c2.push_back(c2s[2]);
    }
    for (std::size_t i = 1; i < budgets.size(); ++i) {
        CHECK(med_c1[i] <= med_c1[i - 1] * 1.10);
        CHECK(med_c2[i] <= med_c2[i - 1] * 1.10 + 1e-12);
    }
}

TEST_CASE("report CSV layout") {
    auto rep = harmonic_trial(7, 32, 2.0, SamplingPlan{2000, 256, 7});
    auto csv = make_csv();
    append_csv(csv, rep);
    const std::string text = csv.str();
    CHECK(text.starts_with("lemma,seed,n,p,q,r,lhs,rhs1,rhs2,C1_fit,C2_fit,margin\n"));
    CHECK(text.find("harmonic,7,32,") != std::string::npos);
}
