#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "nspr/errors.hpp"
#include "nspr/grid.hpp"

namespace nspr {

/// Deterministic quadrature budget for ball/sphere/cylinder averages.
/// Identical plans yield identical point sets.
struct SamplingPlan {
    int n_volume = 32768;
    int n_boundary = 4096;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_volume < 1000) throw ConfigError("sampling plan requires n_volume >= 1000");
        if (n_boundary < 100) throw ConfigError("sampling plan requires n_boundary >= 100");
    }
};

namespace detail {

inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

/// Cranley-Patterson rotation offsets: the seed shifts the whole sequence
/// mod 1 per dimension, preserving low discrepancy.
template <int Dim>
inline std::array<double, Dim> rotation_offsets(std::uint64_t seed) {
    std::mt19937_64 eng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::array<double, Dim> out{};
    for (int d = 0; d < Dim; ++d) out[d] = uni(eng);
    return out;
}

inline double frac(double x) { return x - std::floor(x); }

/// Unit direction from two uniforms via the equal-area map.
inline Vec3 unit_direction(double a, double b) {
    const double z = 1.0 - 2.0 * a;
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * b;
    return {s * std::cos(phi), s * std::sin(phi), z};
}

}  // namespace detail

/// Low-discrepancy points uniform in the unit ball (canonical coordinates).
inline std::vector<Vec3> unit_ball_points(int count, std::uint64_t seed) {
    auto off = detail::rotation_offsets<3>(seed);
    std::vector<Vec3> pts;
    pts.reserve(count);
    for (int q = 0; q < count; ++q) {
        const std::uint64_t ix = static_cast<std::uint64_t>(q) + 1;
        const double a = detail::frac(detail::halton(ix, 2) + off[0]);
        const double b = detail::frac(detail::halton(ix, 3) + off[1]);
        const double c = detail::frac(detail::halton(ix, 5) + off[2]);
        Vec3 dir = detail::unit_direction(a, b);
        const double rho = std::cbrt(c);
        pts.push_back(rho * dir);
    }
    return pts;
}

namespace detail {

/// Seeded rigid rotation (uniform random quaternion).
inline std::array<double, 9> rotation_matrix(std::uint64_t seed) {
    std::mt19937_64 eng(seed ^ 0xd1b54a32d192ed03ull);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double q0, q1, q2, q3, n2;
    do {
        q0 = uni(eng);
        q1 = uni(eng);
        q2 = uni(eng);
        q3 = uni(eng);
        n2 = q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3;
    } while (n2 < 1e-8 || n2 > 1.0);
    const double s = 1.0 / std::sqrt(n2);
    q0 *= s;
    q1 *= s;
    q2 *= s;
    q3 *= s;
    return {1 - 2 * (q2 * q2 + q3 * q3), 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2),
            2 * (q1 * q2 + q0 * q3), 1 - 2 * (q1 * q1 + q3 * q3), 2 * (q2 * q3 - q0 * q1),
            2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), 1 - 2 * (q1 * q1 + q2 * q2)};
}

inline Vec3 rotate(const std::array<double, 9>& R, const Vec3& v) {
    return {R[0] * v[0] + R[1] * v[1] + R[2] * v[2],
            R[3] * v[0] + R[4] * v[1] + R[5] * v[2],
            R[6] * v[0] + R[7] * v[1] + R[8] * v[2]};
}

}  // namespace detail

/// Spherical Fibonacci lattice under a seeded rigid rotation. Far lower
/// spherical discrepancy than mapped Halton pairs, which matters for the
/// Poisson-kernel quadrature; the rotation decorrelates seeds.
inline std::vector<Vec3> unit_sphere_points(int count, std::uint64_t seed) {
    const auto R = detail::rotation_matrix(seed);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> pts;
    pts.reserve(count);
    for (int q = 0; q < count; ++q) {
        const double z = 1.0 - (2.0 * q + 1.0) / count;
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * q;
        pts.push_back(detail::rotate(R, {s * std::cos(phi), s * std::sin(phi), z}));
    }
    return pts;
}

/// Canonical space-time node for the unit parabolic cylinder B_1 x (-1, 0]:
/// x in the unit ball, s in (-1, 0].
struct CylinderNode {
    Vec3 x;
    double s;
};

inline std::vector<CylinderNode> unit_cylinder_points(int count, std::uint64_t seed) {
    auto off = detail::rotation_offsets<4>(seed);
    std::vector<CylinderNode> pts;
    pts.reserve(count);
    for (int q = 0; q < count; ++q) {
        const std::uint64_t ix = static_cast<std::uint64_t>(q) + 1;
        const double a = detail::frac(detail::halton(ix, 2) + off[0]);
        const double b = detail::frac(detail::halton(ix, 3) + off[1]);
        const double c = detail::frac(detail::halton(ix, 5) + off[2]);
        const double d = detail::frac(detail::halton(ix, 7) + off[3]);
        Vec3 dir = detail::unit_direction(a, b);
        pts.push_back({std::cbrt(c) * dir, -d});
    }
    return pts;
}

inline void require_ball_in_box(const Vec3& /*center*/, double r, double box_length) {
    if (!(r > 0.0)) throw RadiusTooLarge("radius must be positive");
    if (!(r < 0.5 * box_length))
        throw RadiusTooLarge("ball of radius " + std::to_string(r) +
                             " does not fit in box of side " + std::to_string(box_length));
}

/// Monte-Carlo / low-discrepancy estimate of the p-average (1/|B_r|) int_{B_r} |f|^p.
/// `f` is any callable Vec3 -> double.
template <class F>
inline double ball_average_of(F&& f, const Vec3& center, double r, double p, const SamplingPlan& plan) {
    plan.validate();
    auto pts = unit_ball_points(plan.n_volume, plan.seed);
    double acc = 0.0;
    for (const Vec3& u : pts) {
        const double v = std::abs(f(center + r * u));
        acc += (p == 1.0) ? v : ((p == 2.0) ? v * v : std::pow(v, p));
    }
    return acc / static_cast<double>(pts.size());
}

/// Signed mean (1/|B_r|) int_{B_r} f — no absolute value, p = 1.
template <class F>
inline double ball_mean_of(F&& f, const Vec3& center, double r, const SamplingPlan& plan) {
    plan.validate();
    auto pts = unit_ball_points(plan.n_volume, plan.seed);
    double acc = 0.0;
    for (const Vec3& u : pts) acc += f(center + r * u);
    return acc / static_cast<double>(pts.size());
}

template <class F>
inline double sphere_average_of(F&& f, const Vec3& center, double r, double p, const SamplingPlan& plan) {
    plan.validate();
    auto pts = unit_sphere_points(plan.n_boundary, plan.seed);
    double acc = 0.0;
    for (const Vec3& u : pts) {
        const double v = std::abs(f(center + r * u));
        acc += (p == 1.0) ? v : ((p == 2.0) ? v * v : std::pow(v, p));
    }
    return acc / static_cast<double>(pts.size());
}

}  // namespace nspr
