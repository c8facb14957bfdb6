#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "nspr/field.hpp"

namespace nspr {
namespace spectral {

using Complex = std::complex<double>;

/// Half-spectrum coefficient array of an n^3 real field: index
/// (ih, j, k) with ih in [0, n/2], x the transformed-fastest axis.
struct Spectrum {
    Grid grid;
    std::vector<Complex> coeff;

    explicit Spectrum(const Grid& g)
        : grid(g), coeff(static_cast<std::size_t>(g.n() / 2 + 1) * g.n() * g.n()) {}

    std::size_t index(int ih, int j, int k) const {
        const int n = grid.n();
        const int nh = n / 2 + 1;
        return static_cast<std::size_t>(ih) + static_cast<std::size_t>(nh) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n) * k);
    }
};

/// Signed integer mode number for storage index j in [0, n).
inline int mode(int j, int n) { return (j <= n / 2) ? j : j - n; }

namespace detail {

struct PlanSet {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    std::size_t nreal = 0, ncplx = 0;
};

// One shared plan cache; FFTW planning is not thread-safe, and the shared
// scratch buffers make execution single-writer as well.
inline std::mutex& fft_mutex() {
    static std::mutex m;
    return m;
}

inline PlanSet& plans_for(int n) {
    static std::map<int, PlanSet> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    PlanSet p;
    p.nreal = static_cast<std::size_t>(n) * n * n;
    p.ncplx = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    p.real = fftw_alloc_real(p.nreal);
    p.cplx = fftw_alloc_complex(p.ncplx);
    // storage is x-fastest, so FFTW's row-major dims are (z, y, x)
    p.r2c = fftw_plan_dft_r2c_3d(n, n, n, p.real, p.cplx, FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_3d(n, n, n, p.cplx, p.real, FFTW_ESTIMATE);
    return cache.emplace(n, p).first->second;
}

}  // namespace detail

inline Spectrum forward(const ScalarField& f) {
    const int n = f.grid().n();
    Spectrum out(f.grid());
    std::lock_guard<std::mutex> lock(detail::fft_mutex());
    auto& p = detail::plans_for(n);
    std::copy(f.values().begin(), f.values().end(), p.real);
    fftw_execute(p.r2c);
    for (std::size_t q = 0; q < p.ncplx; ++q) out.coeff[q] = Complex(p.cplx[q][0], p.cplx[q][1]);
    return out;
}

inline ScalarField backward(const Spectrum& s) {
    const int n = s.grid.n();
    ScalarField out(s.grid);
    std::lock_guard<std::mutex> lock(detail::fft_mutex());
    auto& p = detail::plans_for(n);
    for (std::size_t q = 0; q < p.ncplx; ++q) {
        p.cplx[q][0] = s.coeff[q].real();
        p.cplx[q][1] = s.coeff[q].imag();
    }
    fftw_execute(p.c2r);
    const double scale = 1.0 / static_cast<double>(p.nreal);
    for (std::size_t q = 0; q < p.nreal; ++q) out.values()[q] = p.real[q] * scale;
    return out;
}

/// Apply fn(spectrum&) between a forward and a backward transform.
template <class Fn>
inline ScalarField filtered(const ScalarField& f, Fn&& fn) {
    Spectrum s = forward(f);
    fn(s);
    return backward(s);
}

/// Iterate (ih, j, k, kx, ky, kz) over the half spectrum; k* are physical
/// wavenumbers 2*pi*m/L.
template <class Fn>
inline void for_each_mode(Spectrum& s, Fn&& fn) {
    const int n = s.grid.n();
    const double k0 = 2.0 * std::numbers::pi / s.grid.box_length();
    for (int k = 0; k < n; ++k) {
        const double kz = k0 * mode(k, n);
        for (int j = 0; j < n; ++j) {
            const double ky = k0 * mode(j, n);
            for (int ih = 0; ih <= n / 2; ++ih) {
                const double kx = k0 * ih;
                fn(s.coeff[s.index(ih, j, k)], kx, ky, kz, ih, j, k);
            }
        }
    }
}

/// True when any axis carries the (unsigned-sign) Nyquist mode; first
/// derivatives zero it to keep the result real and symmetric.
inline bool has_nyquist(int ih, int j, int k, int n) {
    return ih == n / 2 || j == n / 2 || k == n / 2;
}

/// Fourier-space partial derivative along axis d; exact for resolved modes.
inline ScalarField derivative(const ScalarField& f, int d) {
    Spectrum s = forward(f);
    const int n = s.grid.n();
    for_each_mode(s, [&](Complex& c, double kx, double ky, double kz, int ih, int j, int k) {
        if (has_nyquist(ih, j, k, n)) {
            c = 0.0;
            return;
        }
        const double kd = (d == 0) ? kx : (d == 1) ? ky : kz;
        c *= Complex(0.0, kd);
    });
    return backward(s);
}

inline VectorField gradient(const ScalarField& f) {
    Spectrum base = forward(f);
    const int n = base.grid.n();
    VectorField out(f.grid());
    for (int d = 0; d < 3; ++d) {
        Spectrum s = base;
        for_each_mode(s, [&](Complex& c, double kx, double ky, double kz, int ih, int j, int k) {
            if (has_nyquist(ih, j, k, n)) {
                c = 0.0;
                return;
            }
            const double kd = (d == 0) ? kx : (d == 1) ? ky : kz;
            c *= Complex(0.0, kd);
        });
        out[d] = backward(s);
    }
    return out;
}

inline ScalarField divergence(const VectorField& v) {
    const int n = v.grid().n();
    Spectrum acc(v.grid());
    for (int d = 0; d < 3; ++d) {
        Spectrum s = forward(v[d]);
        for_each_mode(s, [&](Complex& c, double kx, double ky, double kz, int ih, int j, int k) {
            if (has_nyquist(ih, j, k, n)) {
                c = 0.0;
                return;
            }
            const double kd = (d == 0) ? kx : (d == 1) ? ky : kz;
            c *= Complex(0.0, kd);
        });
        for (std::size_t q = 0; q < acc.coeff.size(); ++q) acc.coeff[q] += s.coeff[q];
    }
    return backward(acc);
}

inline ScalarField laplacian(const ScalarField& f) {
    Spectrum s = forward(f);
    for_each_mode(s, [&](Complex& c, double kx, double ky, double kz, int, int, int) {
        c *= -(kx * kx + ky * ky + kz * kz);
    });
    return backward(s);
}

/// Zero-mean solution of Laplace(w) = source on the torus (the source's
/// mean mode is dropped; callers needing the dropped constant use
/// dropped_mean below).
inline ScalarField invert_laplacian(const ScalarField& source) {
    Spectrum s = forward(source);
    for_each_mode(s, [&](Complex& c, double kx, double ky, double kz, int ih, int j, int k) {
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (ih == 0 && j == 0 && k == 0) {
            c = 0.0;
        } else {
            c /= -k2;
        }
    });
    return backward(s);
}

/// Zero-mean solution of Laplace(w) = div F.
inline ScalarField invert_laplacian_div(const VectorField& F) {
    Spectrum acc(F.grid());
    const int n = F.grid().n();
    for (int d = 0; d < 3; ++d) {
        Spectrum s = forward(F[d]);
        for_each_mode(s, [&](Complex& c, double kx, double ky, double kz, int ih, int j, int k) {
            const double k2 = kx * kx + ky * ky + kz * kz;
            if ((ih == 0 && j == 0 && k == 0) || has_nyquist(ih, j, k, n)) {
                c = 0.0;
                return;
            }
            const double kd = (d == 0) ? kx : (d == 1) ? ky : kz;
            c *= Complex(0.0, kd) / (-k2);
        });
        for (std::size_t q = 0; q < acc.coeff.size(); ++q) acc.coeff[q] += s.coeff[q];
    }
    return backward(acc);
}

/// Zero-mean solution of Laplace(w) = div^2 G = sum_ij d_i d_j G_ij.
inline ScalarField invert_laplacian_div2(const SymTensorField& G) {
    Spectrum acc(G.grid());
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            Spectrum s = forward(G(a, b));
            for_each_mode(s, [&](Complex& c, double kx, double ky, double kz, int ih, int j, int k) {
                const double k2 = kx * kx + ky * ky + kz * kz;
                if (ih == 0 && j == 0 && k == 0) {
                    c = 0.0;
                    return;
                }
                const double ka = (a == 0) ? kx : (a == 1) ? ky : kz;
                const double kb = (b == 0) ? kx : (b == 1) ? ky : kz;
                c *= ka * kb / k2;  // (i ka)(i kb)/(-k2)
            });
            for (std::size_t q = 0; q < acc.coeff.size(); ++q) acc.coeff[q] += s.coeff[q];
        }
    }
    return backward(acc);
}

/// In-place Helmholtz-Leray projection of spectral coefficients:
/// vhat -> vhat - khat (khat . vhat).
inline void leray_project_spectra(std::array<Spectrum, 3>& vs) {
    const Grid& g = vs[0].grid;
    const int n = g.n();
    const double k0 = 2.0 * std::numbers::pi / g.box_length();
    for (int k = 0; k < n; ++k) {
        const double kz = k0 * mode(k, n);
        for (int j = 0; j < n; ++j) {
            const double ky = k0 * mode(j, n);
            for (int ih = 0; ih <= n / 2; ++ih) {
                const double kx = k0 * ih;
                const double k2 = kx * kx + ky * ky + kz * kz;
                if (k2 == 0.0) continue;
                const std::size_t q = vs[0].index(ih, j, k);
                const Complex kdotv = kx * vs[0].coeff[q] + ky * vs[1].coeff[q] + kz * vs[2].coeff[q];
                vs[0].coeff[q] -= kx * kdotv / k2;
                vs[1].coeff[q] -= ky * kdotv / k2;
                vs[2].coeff[q] -= kz * kdotv / k2;
            }
        }
    }
}

/// Helmholtz-Leray projection v - grad(invlap(div v)).
inline VectorField leray_project(const VectorField& v) {
    std::array<Spectrum, 3> vs{forward(v[0]), forward(v[1]), forward(v[2])};
    leray_project_spectra(vs);
    return VectorField(backward(vs[0]), backward(vs[1]), backward(vs[2]));
}

/// L-infinity norm of div v computed from spectral coefficients.
inline double divergence_max(const std::array<Spectrum, 3>& vs) {
    Spectrum acc(vs[0].grid);
    const int n = vs[0].grid.n();
    const double k0 = 2.0 * std::numbers::pi / vs[0].grid.box_length();
    for (int k = 0; k < n; ++k) {
        const double kz = k0 * mode(k, n);
        for (int j = 0; j < n; ++j) {
            const double ky = k0 * mode(j, n);
            for (int ih = 0; ih <= n / 2; ++ih) {
                if (has_nyquist(ih, j, k, n)) continue;
                const double kx = k0 * ih;
                const std::size_t q = acc.index(ih, j, k);
                acc.coeff[q] = Complex(0.0, 1.0) *
                               (kx * vs[0].coeff[q] + ky * vs[1].coeff[q] + kz * vs[2].coeff[q]);
            }
        }
    }
    return backward(acc).max_abs();
}

/// 2/3-rule dealiasing: zero every mode with |m_d| > n/3 on any axis.
inline void dealias(Spectrum& s) {
    const int n = s.grid.n();
    const int cut = n / 3;
    for_each_mode(s, [&](Complex& c, double, double, double, int ih, int j, int k) {
        if (ih > cut || std::abs(mode(j, n)) > cut || std::abs(mode(k, n)) > cut) c = 0.0;
    });
}

inline ScalarField dealiased(const ScalarField& f) {
    Spectrum s = forward(f);
    dealias(s);
    return backward(s);
}

/// |Du|^2 = sum_{d,c} (d_d u_c)^2 as a grid field, derivatives spectral.
inline ScalarField grad_norm_sq(const VectorField& u) {
    ScalarField out(u.grid());
    for (int c = 0; c < 3; ++c) {
        VectorField g = gradient(u[c]);
        for (int d = 0; d < 3; ++d) {
            const auto& gv = g[d].values();
            auto& ov = out.values();
            for (std::size_t q = 0; q < ov.size(); ++q) ov[q] += gv[q] * gv[q];
        }
    }
    return out;
}

}  // namespace spectral
}  // namespace nspr
