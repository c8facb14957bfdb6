#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nspr/analytic.hpp"
#include "nspr/average.hpp"
#include "nspr/csv.hpp"
#include "nspr/elliptic.hpp"
#include "nspr/spectral.hpp"

namespace nspr {
namespace monotonicity {

enum class LemmaId { harmonic, inhom_a, inhom_b, interpolated };

inline std::string lemma_name(LemmaId id) {
    switch (id) {
        case LemmaId::harmonic: return "harmonic";
        case LemmaId::inhom_a: return "inhom_a";
        case LemmaId::inhom_b: return "inhom_b";
        case LemmaId::interpolated: return "interpolated";
    }
    return "?";
}

struct ReportRow {
    double r;
    double lhs;
    double rhs1;
    double rhs2;
    double margin;
    bool degenerate = false;  // lhs under the noise floor: reported, not asserted
};

/// Left/right-hand sides per radius, fitted constants, and the pass flag.
struct MonotonicityReport {
    LemmaId lemma;
    std::uint64_t seed = 0;
    int grid_n = 0;
    double p = 0.0;
    double q = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<ReportRow> rows;
};

inline std::vector<double> default_radii() {
    // covers both the r < 1/2 proof branch and the trivial 1/2 <= r <= 1 one
    return {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.625, 0.75, 1.0};
}

namespace detail {

constexpr double kDegenerateLhs = 1e-10;

/// Smallest constants in the proof's two-branch sense: C1 covers the
/// trivial branch r >= 1/2 alone, C2 absorbs what remains below it.
inline void fit_constants(MonotonicityReport& rep) {
    double c1 = 0.0;
    for (const auto& row : rep.rows) {
        if (row.r < 0.5 || row.degenerate) continue;
        c1 = std::max(c1, row.rhs1 > 0.0 ? row.lhs / row.rhs1 : (row.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
    }
    double c2 = 0.0;
    for (const auto& row : rep.rows) {
        if (row.r >= 0.5 || row.degenerate) continue;
        const double excess = row.lhs - c1 * row.rhs1;
        if (excess <= 0.0) continue;
        c2 = std::max(c2, row.rhs2 > 0.0 ? excess / row.rhs2 : std::numeric_limits<double>::infinity());
    }
    rep.c1 = c1;
    rep.c2 = c2;
    double scale = 0.0;
    for (auto& row : rep.rows) scale = std::max(scale, std::abs(row.lhs));
    bool ok = std::isfinite(c1) && std::isfinite(c2);
    for (auto& row : rep.rows) {
        row.margin = c1 * row.rhs1 + c2 * row.rhs2 - row.lhs;
        if (!row.degenerate && row.margin < -1e-9 * std::max(1.0, scale)) ok = false;
    }
    rep.pass = ok;
}

}  // namespace detail

/// Lemma "monotone p-averages of harmonic functions": rows carry the ball
/// average (lhs) and sphere average (rhs1); margin is the smaller of the two
/// increments from the previous radius. Passes when both sequences are
/// nondecreasing within 2x the stated tolerance (relative to sequence scale).
inline MonotonicityReport verify_harmonic(const ScalarField& u, const Vec3& center, double p,
                                          const std::vector<double>& radii, const SamplingPlan& plan,
                                          double tolerance = 1e-4, bool check_harmonicity = false) {
    if (p < 1.0) throw ConfigError("verify_harmonic requires p >= 1");
    if (check_harmonicity) {
        ScalarField lap = spectral::laplacian(u);
        double lap2 = 0.0, u2 = 0.0;
        for (std::size_t i = 0; i < lap.values().size(); ++i) {
            lap2 += lap.values()[i] * lap.values()[i];
            u2 += u.values()[i] * u.values()[i];
        }
        if (std::sqrt(lap2) > 1e-6 * std::sqrt(u2))
            throw NotHarmonic("spectral Laplacian residual above 1e-6 * ||u||");
    }
    MonotonicityReport rep;
    rep.lemma = LemmaId::harmonic;
    rep.p = p;
    rep.tolerance = tolerance;
    for (double r : radii) {
        ReportRow row{};
        row.r = r;
        row.lhs = ball_average(u, center, r, p, plan);
        row.rhs1 = sphere_average(u, center, r, p, plan);
        row.rhs2 = 0.0;
        row.degenerate = row.lhs < detail::kDegenerateLhs && row.rhs1 < detail::kDegenerateLhs;
        rep.rows.push_back(row);
    }
    double scale = 0.0;
    for (const auto& row : rep.rows) scale = std::max({scale, row.lhs, row.rhs1});
    bool ok = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (i == 0) {
            rep.rows[i].margin = 0.0;
            continue;
        }
        const double db = rep.rows[i].lhs - rep.rows[i - 1].lhs;
        const double ds = rep.rows[i].rhs1 - rep.rows[i - 1].rhs1;
        rep.rows[i].margin = std::min(db, ds);
        if (!rep.rows[i].degenerate && rep.rows[i].margin < -2.0 * tolerance * scale) ok = false;
    }
    rep.pass = ok;
    rep.c1 = 1.0;
    rep.c2 = 0.0;
    return rep;
}

/// Inhomogeneous monotonicity, div^2 form. The trial solution
/// u = harmonic_part + w is a distributional solution of Lap(u) = div^2 G in
/// B_{r0}; radii are relative to r0 (the lemma's unit ball maps onto B_{r0}).
inline MonotonicityReport verify_inhom_b(const analytic::HarmonicPolynomial& harmonic_part,
                                         const SymTensorField& G, double p,
                                         const std::vector<double>& radii, const Vec3& center, double r0,
                                         const SamplingPlan& plan) {
    if (!(p > 1.0)) throw ConfigError("lemma (b) requires p > 1");
    elliptic::BallField w =
        elliptic::solve_dirichlet_div2({center, r0, ScalarField(G.grid(), 0.0), G}, plan);
    auto u = [&](const Vec3& x) { return harmonic_part(x) + w(x); };

    MonotonicityReport rep;
    rep.lemma = LemmaId::inhom_b;
    rep.p = p;
    const double rhs1 = ball_average_of(u, center, r0, p, plan);
    const double g_avg = ball_average_of([&](const Vec3& x) { return G.sample_norm(x); }, center, r0, p, plan);
    for (double r : radii) {
        ReportRow row{};
        row.r = r;
        row.lhs = ball_average_of(u, center, r * r0, p, plan);
        row.rhs1 = rhs1;
        row.rhs2 = g_avg / (r * r * r);
        row.degenerate = row.lhs < detail::kDegenerateLhs;
        rep.rows.push_back(row);
    }
    detail::fit_constants(rep);
    return rep;
}

/// Inhomogeneous monotonicity, div form, exponents 1 <= q < 3, p <= 3q/(3-q).
inline MonotonicityReport verify_inhom_a(const analytic::HarmonicPolynomial& harmonic_part,
                                         const VectorField& F, double q, double p,
                                         const std::vector<double>& radii, const Vec3& center, double r0,
                                         const SamplingPlan& plan) {
    if (q < 1.0 || q >= 3.0) throw ConfigError("lemma (a) requires 1 <= q < 3");
    if (p < 1.0 || p > 3.0 * q / (3.0 - q) + 1e-12)
        throw ConfigError("lemma (a) requires 1 <= p <= 3q/(3-q)");
    elliptic::BallField w =
        elliptic::solve_dirichlet_div({center, r0, ScalarField(F.grid(), 0.0), F}, plan);
    auto u = [&](const Vec3& x) { return harmonic_part(x) + w(x); };

    MonotonicityReport rep;
    rep.lemma = LemmaId::inhom_a;
    rep.p = p;
    rep.q = q;
    const double rhs1 = ball_average_of(u, center, r0, p, plan);
    const double f_avg = ball_average_of([&](const Vec3& x) { return norm(F.sample(x)); }, center, r0, q, plan);
    const double f_term = std::pow(f_avg, p / q);
    for (double r : radii) {
        ReportRow row{};
        row.r = r;
        row.lhs = ball_average_of(u, center, r * r0, p, plan);
        row.rhs1 = rhs1;
        row.rhs2 = f_term / (r * r * r);
        row.degenerate = row.lhs < detail::kDegenerateLhs;
        rep.rows.push_back(row);
    }
    detail::fit_constants(rep);
    return rep;
}

/// Interpolated monotonicity (3-d only): cube averages on the left, plain
/// integrals on the right, evaluated from callables for the value and for
/// |Du|^2. Radii relative to r0.
template <class U, class GradSq>
inline MonotonicityReport verify_interpolated_of(U&& u, GradSq&& grad_sq, const Vec3& center, double r0,
                                                 const std::vector<double>& radii, const SamplingPlan& plan) {
    MonotonicityReport rep;
    rep.lemma = LemmaId::interpolated;
    rep.p = 3.0;
    const double rhs1 = ball_average_of(u, center, r0, 3.0, plan);
    // unit-scale plain integrals of the rescaled function u(r0 x):
    //   int_{B_{3/4}} |u|^2 -> average over B_{3/4 r0} times |B_{3/4}|
    //   int_{B_1} |Du|^2    -> r0^2 * average over B_{r0} times |B_1|
    const double u2_int = ball_average_of(u, center, 0.75 * r0, 2.0, plan) * ball_volume(0.75);
    const double du2_int =
        r0 * r0 * ball_mean_of(grad_sq, center, r0, plan) * ball_volume(1.0);
    const double rhs2_base = std::sqrt(u2_int) * du2_int;
    for (double r : radii) {
        ReportRow row{};
        row.r = r;
        row.lhs = ball_average_of(u, center, r * r0, 3.0, plan);
        row.rhs1 = rhs1;
        row.rhs2 = rhs2_base / (r * r * r);
        row.degenerate = row.lhs < detail::kDegenerateLhs;
        rep.rows.push_back(row);
    }
    detail::fit_constants(rep);
    return rep;
}

/// Grid-field front end: |Du|^2 comes from the spectral gradient, so u must
/// be smooth and periodic.
inline MonotonicityReport verify_interpolated(const ScalarField& u, const Vec3& center, double r0,
                                              const std::vector<double>& radii, const SamplingPlan& plan) {
    VectorField du = spectral::gradient(u);
    ScalarField du2(u.grid());
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < du2.values().size(); ++i)
            du2.values()[i] += du[d].values()[i] * du[d].values()[i];
    return verify_interpolated_of([&](const Vec3& x) { return u.sample(x); },
                                  [&](const Vec3& x) { return du2.sample(x); }, center, r0, radii, plan);
}

/// CSV layout shared by every lemma harness.
inline CsvWriter make_csv() {
    return CsvWriter({"lemma", "seed", "n", "p", "q", "r", "lhs", "rhs1", "rhs2", "C1_fit", "C2_fit", "margin"});
}

inline void append_csv(CsvWriter& csv, const MonotonicityReport& rep) {
    for (const auto& row : rep.rows) {
        csv.add_row({lemma_name(rep.lemma), std::to_string(rep.seed), std::to_string(rep.grid_n),
                     CsvWriter::num(rep.p), CsvWriter::num(rep.q), CsvWriter::num(row.r),
                     CsvWriter::num(row.lhs), CsvWriter::num(row.rhs1), CsvWriter::num(row.rhs2),
                     CsvWriter::num(rep.c1), CsvWriter::num(rep.c2), CsvWriter::num(row.margin)});
    }
}

/// Seeded corpus drivers used by the CLI and the acceptance suite.

inline MonotonicityReport harmonic_trial(std::uint64_t seed, int n, double p, const SamplingPlan& plan,
                                         double tolerance = 1e-4) {
    Grid grid(n);
    const Vec3 center{0.5 * grid.box_length(), 0.5 * grid.box_length(), 0.5 * grid.box_length()};
    auto poly = analytic::random_harmonic(seed, 3, center);
    ScalarField u = poly.sampled(grid);
    std::vector<double> radii{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    MonotonicityReport rep = verify_harmonic(u, center, p, radii, plan, tolerance);
    rep.seed = seed;
    rep.grid_n = n;
    return rep;
}

inline SymTensorField random_tensor(std::uint64_t seed, const Grid& grid, double amplitude = 1.0) {
    SymTensorField G(grid);
    int c = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            auto t = analytic::TrigPoly::random(seed * 131 + c++, 2, amplitude, grid.box_length());
            G(a, b) = t.sampled(grid);
            if (a != b) G(b, a) = G(a, b);
        }
    return G;
}

inline VectorField random_vector(std::uint64_t seed, const Grid& grid, double amplitude = 1.0) {
    VectorField F(grid);
    for (int d = 0; d < 3; ++d)
        F[d] = analytic::TrigPoly::random(seed * 257 + d, 2, amplitude, grid.box_length()).sampled(grid);
    return F;
}

inline MonotonicityReport inhom_b_trial(std::uint64_t seed, int n, double p, const SamplingPlan& plan,
                                        bool scan_r0 = false) {
    Grid grid(n);
    const Vec3 center{0.5 * grid.box_length(), 0.5 * grid.box_length(), 0.5 * grid.box_length()};
    auto hp = analytic::random_harmonic(seed, 2, center);
    SymTensorField G = random_tensor(seed, grid);
    const double r0 = elliptic::choose_ball_radius(hp.sampled(grid), center, p, plan, scan_r0);
    MonotonicityReport rep = verify_inhom_b(hp, G, p, default_radii(), center, r0, plan);
    rep.seed = seed;
    rep.grid_n = n;
    return rep;
}

inline MonotonicityReport inhom_a_trial(std::uint64_t seed, int n, double q, double p,
                                        const SamplingPlan& plan, bool scan_r0 = false) {
    Grid grid(n);
    const Vec3 center{0.5 * grid.box_length(), 0.5 * grid.box_length(), 0.5 * grid.box_length()};
    auto hp = analytic::random_harmonic(seed, 2, center);
    VectorField F = random_vector(seed, grid);
    const double r0 = elliptic::choose_ball_radius(hp.sampled(grid), center, p, plan, scan_r0);
    MonotonicityReport rep = verify_inhom_a(hp, F, q, p, default_radii(), center, r0, plan);
    rep.seed = seed;
    rep.grid_n = n;
    return rep;
}

inline MonotonicityReport interpolated_trial(std::uint64_t seed, int n, const SamplingPlan& plan) {
    Grid grid(n);
    const Vec3 center{0.5 * grid.box_length(), 0.5 * grid.box_length(), 0.5 * grid.box_length()};
    auto t = analytic::TrigPoly::random(seed * 613, 2, 1.0, grid.box_length());
    MonotonicityReport rep = verify_interpolated(t.sampled(grid), center, 0.625, default_radii(), plan);
    rep.seed = seed;
    rep.grid_n = n;
    return rep;
}

}  // namespace monotonicity
}  // namespace nspr
