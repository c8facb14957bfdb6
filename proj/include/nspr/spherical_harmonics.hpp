#pragma once

#include <cmath>
#include <vector>

#include "nspr/grid.hpp"

namespace nspr {
namespace sph {

/// Orthonormal real spherical harmonics Y_lm evaluated at a unit direction,
/// packed as index l*(l+1)+m for m in [-l, l]. Uses the standard stable
/// normalized-Legendre recurrences.
inline void real_sph_basis(const Vec3& dir, int lmax, std::vector<double>& out) {
    const int count = (lmax + 1) * (lmax + 1);
    out.assign(count, 0.0);
    const double x = dir[2];                                   // cos(theta)
    const double sxy = std::hypot(dir[0], dir[1]);             // sin(theta)
    double cphi = 1.0, sphi = 0.0;
    const double cp = (sxy > 1e-300) ? dir[0] / sxy : 1.0;
    const double sp = (sxy > 1e-300) ? dir[1] / sxy : 0.0;

    // S[l][m] = N_lm P_l^m(x) for the current m-diagonal sweep
    std::vector<double> smm(lmax + 1);
    smm[0] = std::sqrt(1.0 / (4.0 * std::numbers::pi));
    for (int m = 1; m <= lmax; ++m)
        smm[m] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sxy * smm[m - 1];

    for (int m = 0; m <= lmax; ++m) {
        // cos(m phi), sin(m phi) by angle addition
        if (m > 0) {
            const double c = cphi * cp - sphi * sp;
            const double s = sphi * cp + cphi * sp;
            cphi = c;
            sphi = s;
        }
        const double sqrt2 = (m == 0) ? 1.0 : std::numbers::sqrt2;
        double sl2 = 0.0;                   // S_{l-2, m}
        double sl1 = smm[m];                // S_{m, m}
        for (int l = m; l <= lmax; ++l) {
            double slm;
            if (l == m) {
                slm = sl1;
            } else if (l == m + 1) {
                slm = std::sqrt(2.0 * m + 3.0) * x * sl1;
            } else {
                const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
                const double b = std::sqrt(((2.0 * l + 1.0) / (2.0 * l - 3.0)) *
                                           ((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                            (static_cast<double>(l) * l - static_cast<double>(m) * m)));
                slm = a * x * sl1 - b * sl2;
            }
            if (l > m) {
                sl2 = sl1;
                sl1 = slm;
            }
            const int base = l * (l + 1);
            out[base + m] = sqrt2 * slm * cphi;
            if (m > 0) out[base - m] = sqrt2 * slm * sphi;
        }
    }
}

/// Interior harmonic function from sphere samples: project the (mean-removed)
/// boundary data onto Y_lm with the equal-weight node quadrature, then
/// evaluate h(x) = mean + sum a_lm (|x-c|/r0)^l Y_lm(xhat). The mean split
/// keeps constants exact. Degree <= lmax boundary polynomials are exact up
/// to node-quadrature error.
class SolidHarmonicExpansion {
  public:
    SolidHarmonicExpansion() = default;

    SolidHarmonicExpansion(const Vec3& center, double r0, const std::vector<Vec3>& directions,
                           const std::vector<double>& values, int lmax = 24)
        : center_(center), r0_(r0), lmax_(lmax), coeff_((lmax + 1) * (lmax + 1), 0.0) {
        const std::size_t n = directions.size();
        mean_ = 0.0;
        for (double v : values) mean_ += v;
        mean_ /= static_cast<double>(n);
        std::vector<double> basis;
        for (std::size_t i = 0; i < n; ++i) {
            real_sph_basis(directions[i], lmax_, basis);
            const double v = values[i] - mean_;
            for (std::size_t c = 0; c < coeff_.size(); ++c) coeff_[c] += v * basis[c];
        }
        const double w = 4.0 * std::numbers::pi / static_cast<double>(n);
        for (double& c : coeff_) c *= w;
    }

    double operator()(const Vec3& x) const {
        Vec3 d = x - center_;
        const double rho = norm(d);
        // only l=0 survives at the center, and it was projected from
        // mean-removed data: h(center) = node mean
        if (rho < 1e-14) return mean_;
        Vec3 dir = (1.0 / rho) * d;
        std::vector<double> basis;
        real_sph_basis(dir, lmax_, basis);
        const double s = rho / r0_;
        double acc = 0.0;
        double sl = 1.0;
        for (int l = 0; l <= lmax_; ++l) {
            double band = 0.0;
            const int base = l * (l + 1);
            for (int m = -l; m <= l; ++m) band += coeff_[base + m] * basis[base + m];
            acc += sl * band;
            sl *= s;
        }
        return mean_ + acc;
    }

  private:
    Vec3 center_{};
    double r0_ = 1.0;
    int lmax_ = 0;
    double mean_ = 0.0;
    std::vector<double> coeff_;
};

}  // namespace sph
}  // namespace nspr
