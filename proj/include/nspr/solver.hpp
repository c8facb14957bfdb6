#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nspr/analytic.hpp"
#include "nspr/spectral.hpp"
#include "nspr/trajectory.hpp"

namespace nspr {
namespace solver {

struct InitSpec {
    enum class Kind { zero, taylor_green, taylor_green3d, random_divfree, from_file };
    Kind kind = Kind::taylor_green;
    double amplitude = 1.0;
    double phase_x = 0.0;   // taylor_green only
    double phase_y = 0.0;
    std::uint64_t seed = 0;  // random_divfree only
    double spectrum_slope = -3.0;
    std::string path;        // from_file only
};

/// Pseudo-spectral integrator configuration; viscosity 1 is the paper's
/// normalization and the one the diagnostics are calibrated for.
struct SolverConfig {
    int n = 32;
    double viscosity = 1.0;
    double dt = 1e-3;
    double t_end = 0.1;
    bool dealias = true;
    int snapshot_stride = 5;
    double box_length = 2.0 * std::numbers::pi;
    InitSpec init;
};

struct State {
    Grid grid;
    std::array<spectral::Spectrum, 3> uhat;
    double t = 0.0;
};

namespace detail {

inline void dealias_if(spectral::Spectrum& s, bool enabled) {
    if (enabled) spectral::dealias(s);
}

/// Dealiased divergence-form nonlinear term N = -P_L div(u x u), returned in
/// spectral space and Leray-projected.
inline std::array<spectral::Spectrum, 3> nonlinear_term(const std::array<spectral::Spectrum, 3>& uhat,
                                                        bool dealias, double* umax_out = nullptr) {
    const Grid& g = uhat[0].grid;
    const int n = g.n();
    std::array<ScalarField, 3> u{spectral::backward(uhat[0]), spectral::backward(uhat[1]),
                                 spectral::backward(uhat[2])};
    if (umax_out) {
        double m = 0.0;
        for (std::size_t q = 0; q < u[0].values().size(); ++q) {
            const double a = u[0].values()[q], b = u[1].values()[q], c = u[2].values()[q];
            m = std::max(m, a * a + b * b + c * c);
        }
        *umax_out = std::sqrt(m);
    }
    // products u_i u_j, i <= j
    std::array<spectral::Spectrum, 6> prod_hat{
        spectral::Spectrum(g), spectral::Spectrum(g), spectral::Spectrum(g),
        spectral::Spectrum(g), spectral::Spectrum(g), spectral::Spectrum(g)};
    int slot = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            ScalarField p(g);
            for (std::size_t q = 0; q < p.values().size(); ++q)
                p.values()[q] = u[i].values()[q] * u[j].values()[q];
            prod_hat[slot] = spectral::forward(p);
            dealias_if(prod_hat[slot], dealias);
            ++slot;
        }
    auto pick = [&](int i, int j) -> const spectral::Spectrum& {
        if (i > j) std::swap(i, j);
        static constexpr int lut[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return prod_hat[lut[i][j]];
    };
    std::array<spectral::Spectrum, 3> nl{spectral::Spectrum(g), spectral::Spectrum(g), spectral::Spectrum(g)};
    const double k0 = 2.0 * std::numbers::pi / g.box_length();
    for (int k = 0; k < n; ++k) {
        const double kz = k0 * spectral::mode(k, n);
        for (int j = 0; j < n; ++j) {
            const double ky = k0 * spectral::mode(j, n);
            for (int ih = 0; ih <= n / 2; ++ih) {
                if (spectral::has_nyquist(ih, j, k, n)) continue;
                const double kx = k0 * ih;
                const std::size_t q = nl[0].index(ih, j, k);
                const double kk[3] = {kx, ky, kz};
                for (int i = 0; i < 3; ++i) {
                    spectral::Complex s = 0.0;
                    for (int d = 0; d < 3; ++d) s += kk[d] * pick(i, d).coeff[q];
                    nl[i].coeff[q] = spectral::Complex(0.0, -1.0) * s;
                }
            }
        }
    }
    spectral::leray_project_spectra(nl);
    return nl;
}

inline std::vector<double> viscous_factor(const Grid& g, double nu, double dt) {
    std::vector<double> e(static_cast<std::size_t>(g.n()) * g.n() * (g.n() / 2 + 1));
    spectral::Spectrum probe(g);
    spectral::for_each_mode(probe, [&](spectral::Complex&, double kx, double ky, double kz, int ih, int j, int k) {
        e[probe.index(ih, j, k)] = std::exp(-nu * (kx * kx + ky * ky + kz * kz) * dt);
    });
    return e;
}

}  // namespace detail

/// Zero-mean pressure from the velocity: Lap(P) = -d_i d_j (u_i u_j), with
/// the quadratic products dealiased.
inline ScalarField compute_pressure(const VectorField& u, bool dealias = true) {
    const Grid& g = u.grid();
    spectral::Spectrum phat(g);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            ScalarField p(g);
            for (std::size_t q = 0; q < p.values().size(); ++q)
                p.values()[q] = u[i].values()[q] * u[j].values()[q];
            spectral::Spectrum s = spectral::forward(p);
            detail::dealias_if(s, dealias);
            const double factor = (i == j) ? 1.0 : 2.0;
            const int n = g.n();
            const double k0 = 2.0 * std::numbers::pi / g.box_length();
            for (int k = 0; k < n; ++k) {
                const double kz = k0 * spectral::mode(k, n);
                for (int jj = 0; jj < n; ++jj) {
                    const double ky = k0 * spectral::mode(jj, n);
                    for (int ih = 0; ih <= n / 2; ++ih) {
                        const double kx = k0 * ih;
                        const double k2 = kx * kx + ky * ky + kz * kz;
                        const std::size_t q = s.index(ih, jj, k);
                        if (k2 == 0.0) continue;
                        const double kk[3] = {kx, ky, kz};
                        // Lap(P) = -d_i d_j (u_i u_j)  =>  Phat = -k_i k_j (u_i u_j)^ / k^2
                        phat.coeff[q] -= factor * (kk[i] * kk[j] / k2) * s.coeff[q];
                    }
                }
            }
        }
    return spectral::backward(phat);
}

inline VectorField leray_project(const VectorField& v) { return spectral::leray_project(v); }

inline State initial_state(const SolverConfig& cfg,
                           const std::function<VectorField(const Grid&)>& file_loader = nullptr) {
    Grid g(cfg.n, cfg.box_length);
    VectorField u(g);
    switch (cfg.init.kind) {
        case InitSpec::Kind::zero:
            break;
        case InitSpec::Kind::taylor_green: {
            analytic::TaylorGreen tg{cfg.init.amplitude, cfg.viscosity, cfg.init.phase_x, cfg.init.phase_y};
            u = tg.velocity_field(g, 0.0);
            break;
        }
        case InitSpec::Kind::taylor_green3d: {
            const double A = cfg.init.amplitude;
            u = VectorField::from_function(g, [A](const Vec3& x) {
                return Vec3{A * std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]),
                            -A * std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]), 0.0};
            });
            break;
        }
        case InitSpec::Kind::random_divfree: {
            std::mt19937_64 eng(cfg.init.seed ^ 0x6a09e667f3bcc909ull);
            std::uniform_real_distribution<double> uni(-1.0, 1.0);
            for (int d = 0; d < 3; ++d)
                for (double& v : u[d].values()) v = uni(eng);
            std::array<spectral::Spectrum, 3> uh{spectral::forward(u[0]), spectral::forward(u[1]),
                                                 spectral::forward(u[2])};
            const double kcut = std::min(cfg.n / 4.0, 8.0);
            const double slope = cfg.init.spectrum_slope;
            for (int d = 0; d < 3; ++d) {
                spectral::for_each_mode(uh[d], [&](spectral::Complex& c, double kx, double ky, double kz,
                                                   int, int, int) {
                    const double kk = std::sqrt(kx * kx + ky * ky + kz * kz);
                    if (kk == 0.0) {
                        c = 0.0;
                        return;
                    }
                    c *= std::pow(kk, 0.5 * slope) * std::exp(-2.0 * std::pow(kk / kcut, 4.0));
                });
            }
            spectral::leray_project_spectra(uh);
            for (int d = 0; d < 3; ++d) u[d] = spectral::backward(uh[d]);
            const double m = u.max_abs();
            if (m > 0.0)
                for (int d = 0; d < 3; ++d)
                    for (double& v : u[d].values()) v *= cfg.init.amplitude / m;
            break;
        }
        case InitSpec::Kind::from_file: {
            if (!file_loader) throw ConfigError("from_file init requires a loader");
            u = file_loader(g);
            break;
        }
    }
    State st{g, {spectral::forward(u[0]), spectral::forward(u[1]), spectral::forward(u[2])}, 0.0};
    spectral::leray_project_spectra(st.uhat);
    return st;
}

/// One integrating-factor RK2 (Heun) step; the viscous semigroup is exact,
/// the dealiased nonlinear term is explicit, and every stage is projected.
inline void step(State& st, const SolverConfig& cfg, double dt) {
    double umax = 0.0;
    auto n1 = detail::nonlinear_term(st.uhat, cfg.dealias, &umax);
    if (umax > 1e6) throw BlowupDetected(umax);
    const double h = st.grid.spacing();
    if (umax > 0.0 && dt > 0.5 * h / umax) throw CflViolation(dt, 0.5 * h / umax, umax);

    const auto E = detail::viscous_factor(st.grid, cfg.viscosity, dt);
    std::array<spectral::Spectrum, 3> pred{st.uhat[0], st.uhat[1], st.uhat[2]};
    for (int d = 0; d < 3; ++d)
        for (std::size_t q = 0; q < pred[d].coeff.size(); ++q)
            pred[d].coeff[q] = E[q] * (st.uhat[d].coeff[q] + dt * n1[d].coeff[q]);
    spectral::leray_project_spectra(pred);

    auto n2 = detail::nonlinear_term(pred, cfg.dealias);
    for (int d = 0; d < 3; ++d)
        for (std::size_t q = 0; q < st.uhat[d].coeff.size(); ++q)
            st.uhat[d].coeff[q] = E[q] * st.uhat[d].coeff[q] +
                                  0.5 * dt * (E[q] * n1[d].coeff[q] + n2[d].coeff[q]);
    spectral::leray_project_spectra(st.uhat);
    st.t += dt;
}

inline VectorField velocity_field(const State& st) {
    return VectorField(spectral::backward(st.uhat[0]), spectral::backward(st.uhat[1]),
                       spectral::backward(st.uhat[2]));
}

/// Integrate to t_end, snapshotting every `snapshot_stride` steps (plus the
/// initial and final states). Each snapshot stores u, the recovered
/// zero-mean pressure, and |Du|^2.
inline Trajectory run(const SolverConfig& cfg, std::string provenance = "",
                      const std::function<VectorField(const Grid&)>& file_loader = nullptr) {
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
    if (cfg.snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
    State st = initial_state(cfg, file_loader);

    std::vector<double> times;
    std::vector<Snapshot> snaps;
    auto record = [&]() {
        VectorField u = velocity_field(st);
        ScalarField p = compute_pressure(u, cfg.dealias);
        times.push_back(st.t);
        snaps.push_back(make_snapshot(std::move(u), std::move(p)));
    };
    record();
    const long n_steps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    for (long s = 0; s < n_steps; ++s) {
        const double dt = std::min(cfg.dt, cfg.t_end - st.t);
        if (dt <= 0.0) break;
        step(st, cfg, dt);
        if ((s + 1) % cfg.snapshot_stride == 0 || s + 1 == n_steps) record();
    }
    return Trajectory(st.grid, std::move(times), std::move(snaps), std::move(provenance));
}

}  // namespace solver
}  // namespace nspr
