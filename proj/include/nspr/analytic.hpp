#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nspr/field.hpp"

namespace nspr {
namespace analytic {

/// Solid-harmonic basis through degree 3, evaluated in coordinates relative
/// to a chosen center.
inline constexpr int kHarmonicBasisSize = 16;

inline double harmonic_basis(int idx, const Vec3& d) {
    const double x = d[0], y = d[1], z = d[2];
    switch (idx) {
        case 0: return 1.0;
        case 1: return x;
        case 2: return y;
        case 3: return z;
        case 4: return x * y;
        case 5: return x * z;
        case 6: return y * z;
        case 7: return x * x - y * y;
        case 8: return 2.0 * z * z - x * x - y * y;
        case 9: return x * x * x - 3.0 * x * y * y;
        case 10: return 3.0 * x * x * y - y * y * y;
        case 11: return x * y * z;
        case 12: return z * (x * x - y * y);
        case 13: return x * (4.0 * z * z - x * x - y * y);
        case 14: return y * (4.0 * z * z - x * x - y * y);
        case 15: return z * (2.0 * z * z - 3.0 * x * x - 3.0 * y * y);
        default: return 0.0;
    }
}

inline int harmonic_basis_degree(int idx) {
    if (idx == 0) return 0;
    if (idx <= 3) return 1;
    if (idx <= 8) return 2;
    return 3;
}

/// A harmonic polynomial about `center`: coefficient vector over the basis.
struct HarmonicPolynomial {
    Vec3 center{0.0, 0.0, 0.0};
    std::array<double, kHarmonicBasisSize> coeff{};

    double operator()(const Vec3& x) const {
        Vec3 d = x - center;
        double s = 0.0;
        for (int i = 0; i < kHarmonicBasisSize; ++i)
            if (coeff[i] != 0.0) s += coeff[i] * harmonic_basis(i, d);
        return s;
    }

    ScalarField sampled(const Grid& grid) const {
        return ScalarField::from_function(grid, [this](const Vec3& x) { return (*this)(x); });
    }
};

/// Seeded harmonic polynomial with uniform coefficients on [-1, 1].
inline HarmonicPolynomial random_harmonic(std::uint64_t seed, int max_degree, const Vec3& center) {
    HarmonicPolynomial p;
    p.center = center;
    std::mt19937_64 eng(seed ^ 0x517cc1b727220a95ull);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < kHarmonicBasisSize; ++i) {
        double c = uni(eng);
        p.coeff[i] = (harmonic_basis_degree(i) <= max_degree) ? c : 0.0;
    }
    return p;
}

/// Random real trigonometric polynomial: sum of a_m cos(k_m . x + phi_m)
/// over integer wavevectors with |k|_inf <= k_max. Smooth and periodic, so
/// spectral operations on its samples are exact.
class TrigPoly {
  public:
    struct Term {
        std::array<int, 3> k;
        double amp;
        double phase;
    };

    TrigPoly() = default;
    explicit TrigPoly(std::vector<Term> terms) : terms_(std::move(terms)) {}

    static TrigPoly random(std::uint64_t seed, int k_max, double amplitude, double box_length) {
        std::mt19937_64 eng(seed ^ 0x2545f4914f6cdd1dull);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        std::uniform_real_distribution<double> uph(0.0, 2.0 * std::numbers::pi);
        std::vector<Term> terms;
        for (int kx = 0; kx <= k_max; ++kx)
            for (int ky = -k_max; ky <= k_max; ++ky)
                for (int kz = -k_max; kz <= k_max; ++kz) {
                    if (kx == 0 && ky == 0 && kz == 0) continue;
                    if (kx == 0 && (ky < 0 || (ky == 0 && kz < 0))) continue;  // one per conjugate pair
                    terms.push_back({{kx, ky, kz}, amplitude * uni(eng), uph(eng)});
                }
        TrigPoly p(std::move(terms));
        p.k_scale_ = 2.0 * std::numbers::pi / box_length;
        return p;
    }

    double operator()(const Vec3& x) const {
        double s = 0.0;
        for (const Term& t : terms_)
            s += t.amp * std::cos(k_scale_ * (t.k[0] * x[0] + t.k[1] * x[1] + t.k[2] * x[2]) + t.phase);
        return s;
    }

    ScalarField sampled(const Grid& grid) const {
        return ScalarField::from_function(grid, [this](const Vec3& x) { return (*this)(x); });
    }

  private:
    std::vector<Term> terms_;
    double k_scale_ = 1.0;
};

/// The 2D-in-3D Taylor-Green pair: an exact decaying Navier-Stokes solution
/// on the periodic box (for any amplitude and phase offsets).
///   u = A (sin X cos Y, -cos X sin Y, 0) exp(-2 nu t),  X = x+px, Y = y+py
///   P = A^2/4 (cos 2X + cos 2Y) exp(-4 nu t)
/// (substitute into the momentum equation: u.grad u = grad[-A^2(cos 2X +
/// cos 2Y)/4 e^{-4 nu t}] and u_t = nu Lap(u), so grad P must flip that sign)
struct TaylorGreen {
    double amplitude = 1.0;
    double viscosity = 1.0;
    double phase_x = 0.0;
    double phase_y = 0.0;

    Vec3 velocity(const Vec3& x, double t) const {
        const double f = amplitude * std::exp(-2.0 * viscosity * t);
        const double X = x[0] + phase_x, Y = x[1] + phase_y;
        return {f * std::sin(X) * std::cos(Y), -f * std::cos(X) * std::sin(Y), 0.0};
    }

    double pressure(const Vec3& x, double t) const {
        const double f = amplitude * amplitude * std::exp(-4.0 * viscosity * t);
        const double X = x[0] + phase_x, Y = x[1] + phase_y;
        return 0.25 * f * (std::cos(2.0 * X) + std::cos(2.0 * Y));
    }

    VectorField velocity_field(const Grid& grid, double t) const {
        return VectorField::from_function(grid, [&](const Vec3& x) { return velocity(x, t); });
    }

    ScalarField pressure_field(const Grid& grid, double t) const {
        return ScalarField::from_function(grid, [&](const Vec3& x) { return pressure(x, t); });
    }
};

}  // namespace analytic
}  // namespace nspr
