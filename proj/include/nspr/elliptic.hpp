#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "nspr/average.hpp"
#include "nspr/field.hpp"
#include "nspr/sampling.hpp"
#include "nspr/spectral.hpp"
#include "nspr/spherical_harmonics.hpp"

namespace nspr {
namespace elliptic {

/// Dirichlet data on a ball: boundary values sampled from the ambient grid,
/// and an optional div-form (F) or div^2-form (G) interior source.
struct BallProblem {
    Vec3 center;
    double r0;
    ScalarField boundary_data;
    std::variant<std::monostate, VectorField, SymTensorField> source;

    void validate() const {
        if (!(r0 > 0.0) || !(r0 < 0.5 * boundary_data.grid().box_length()))
            throw RadiusTooLarge("ball radius r0 must lie in (0, box_length/2)");
        if (const auto* F = std::get_if<VectorField>(&source); F && !F->all_finite())
            throw SingularSource("div-form source contains non-finite values");
        if (const auto* G = std::get_if<SymTensorField>(&source); G && !G->all_finite())
            throw SingularSource("div^2-form source contains non-finite values");
    }
};

/// Poisson-kernel evaluation of the harmonic extension of sphere data.
/// For fixed x the kernel's y-dependence is 1/|x-y|^3; weights are
/// normalized so constants are reproduced exactly and the maximum
/// principle holds pointwise (all weights positive). A solid-harmonic
/// expansion of the same node data provides an O(lmax^2) fast path for
/// bulk evaluation; the two routes agree to expansion-truncation error.
class HarmonicExtension {
  public:
    HarmonicExtension(Vec3 center, double r0, std::vector<Vec3> nodes, std::vector<double> values)
        : center_(center), r0_(r0), nodes_(std::move(nodes)), values_(std::move(values)) {
        std::vector<Vec3> dirs(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) dirs[i] = (1.0 / r0_) * (nodes_[i] - center_);
        expansion_ = sph::SolidHarmonicExpansion(center_, r0_, dirs, values_);
    }

    /// Build from boundary data interpolated at the plan's sphere node set.
    static HarmonicExtension from_field(const ScalarField& boundary_data, const Vec3& center, double r0,
                                        const SamplingPlan& plan) {
        plan.validate();
        auto dirs = unit_sphere_points(plan.n_boundary, plan.seed);
        std::vector<Vec3> nodes(dirs.size());
        std::vector<double> vals(dirs.size());
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            nodes[i] = center + r0 * dirs[i];
            vals[i] = boundary_data.sample(nodes[i]);
        }
        return HarmonicExtension(center, r0, std::move(nodes), std::move(vals));
    }

    template <class F>
    static HarmonicExtension from_function(F&& f, const Vec3& center, double r0, const SamplingPlan& plan) {
        plan.validate();
        auto dirs = unit_sphere_points(plan.n_boundary, plan.seed);
        std::vector<Vec3> nodes(dirs.size());
        std::vector<double> vals(dirs.size());
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            nodes[i] = center + r0 * dirs[i];
            vals[i] = f(nodes[i]);
        }
        return HarmonicExtension(center, r0, std::move(nodes), std::move(vals));
    }

    double operator()(const Vec3& x) const {
        Vec3 d = x - center_;
        const double dist2 = dot(d, d);
        if (!(dist2 < r0_ * r0_))
            throw PointOutsideBall("harmonic extension evaluated outside the open ball");
        double wsum = 0.0, acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            Vec3 dy = x - nodes_[i];
            const double s = dot(dy, dy);
            const double w = 1.0 / (s * std::sqrt(s));
            wsum += w;
            acc += w * values_[i];
        }
        return acc / wsum;
    }

    /// Solid-harmonic fast evaluation (no per-node kernel sum).
    double fast(const Vec3& x) const {
        Vec3 d = x - center_;
        if (!(dot(d, d) < r0_ * r0_))
            throw PointOutsideBall("harmonic extension evaluated outside the open ball");
        return expansion_(x);
    }

    double at_center() const {
        double acc = 0.0;
        for (double v : values_) acc += v;
        return acc / static_cast<double>(values_.size());
    }

  private:
    Vec3 center_;
    double r0_;
    std::vector<Vec3> nodes_;
    std::vector<double> values_;
    sph::SolidHarmonicExpansion expansion_;
};

inline double harmonic_extension(const BallProblem& problem, const Vec3& x, const SamplingPlan& plan) {
    problem.validate();
    if (!std::holds_alternative<std::monostate>(problem.source))
        throw ConfigError("harmonic_extension takes a problem with no source");
    return HarmonicExtension::from_field(problem.boundary_data, problem.center, problem.r0, plan)(x);
}

/// Smooth radial cutoff: 1 on |x-c| <= a, 0 on |x-c| >= b, exp-based bridge
/// between. Multiplying a source by it leaves the PDE unchanged on the ball
/// while making the periodic extension smooth.
inline ScalarField radial_cutoff(const Grid& grid, const Vec3& center, double a, double b) {
    auto bridge = [](double t) {
        auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
        return f(1.0 - t) / (f(t) + f(1.0 - t));
    };
    return ScalarField::from_function(grid, [&](const Vec3& x) {
        const double s = norm(grid.min_image(x, center));
        if (s <= a) return 1.0;
        if (s >= b) return 0.0;
        return bridge((s - a) / (b - a));
    });
}

namespace detail {

/// Cutoff radii for a solve ball inside the periodic box; nullopt when the
/// ball leaves no room for a transition band (then no cutoff is applied).
inline std::optional<std::pair<double, double>> cutoff_band(double r0, double box_length) {
    const double half = 0.5 * box_length;
    const double room = half - r0;
    if (room < 0.05 * box_length) return std::nullopt;
    return std::make_pair(r0 + 0.15 * room, half - 0.1 * room);
}

}  // namespace detail

/// Zero-Dirichlet ball solution evaluated lazily: particular periodic
/// solution (plus a quadratic compensator for any dropped source mean)
/// minus the harmonic extension of its own boundary trace.
class BallField {
  public:
    BallField(Vec3 center, double r0, ScalarField particular, double mean_compensator,
              HarmonicExtension correction)
        : center_(center), r0_(r0), particular_(std::move(particular)),
          mean_comp_(mean_compensator), correction_(std::move(correction)) {}

    const Vec3& center() const { return center_; }
    double r0() const { return r0_; }

    double operator()(const Vec3& x) const {
        Vec3 d = x - center_;
        if (!(dot(d, d) < r0_ * r0_)) throw PointOutsideBall("ball solution evaluated outside the ball");
        return particular_value(x) - correction_.fast(x);
    }

  private:
    double particular_value(const Vec3& x) const {
        Vec3 d = x - center_;
        return particular_.sample(x) + mean_comp_ * dot(d, d) / 6.0;
    }

    friend BallField make_ball_field(Vec3, double, ScalarField, double, const SamplingPlan&);

    Vec3 center_;
    double r0_;
    ScalarField particular_;
    double mean_comp_;
    HarmonicExtension correction_;
};

inline BallField make_ball_field(Vec3 center, double r0, ScalarField particular, double mean_comp,
                                 const SamplingPlan& plan) {
    auto trace = [&](const Vec3& y) {
        Vec3 d = y - center;
        return particular.sample(y) + mean_comp * dot(d, d) / 6.0;
    };
    HarmonicExtension corr = HarmonicExtension::from_function(trace, center, r0, plan);
    return BallField(center, r0, std::move(particular), mean_comp, std::move(corr));
}

/// Solve Laplace(w) = div^2 G in B_{r0}, w = 0 on the sphere.
inline BallField solve_dirichlet_div2(const BallProblem& problem, const SamplingPlan& plan) {
    problem.validate();
    const auto* G = std::get_if<SymTensorField>(&problem.source);
    if (!G) throw ConfigError("solve_dirichlet_div2 needs a div^2-form source");
    const Grid& grid = G->grid();
    // div^2 ignores the mean tensor; removing it before the cutoff keeps
    // constant G mapping to the exact zero solution
    SymTensorField windowed(grid);
    auto band = detail::cutoff_band(problem.r0, grid.box_length());
    std::optional<ScalarField> chi;
    if (band) chi = radial_cutoff(grid, problem.center, band->first, band->second);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            auto& out = windowed(a, b).values();
            const auto& in = (*G)(a, b).values();
            const double m = (*G)(a, b).mean();
            for (std::size_t q = 0; q < out.size(); ++q)
                out[q] = (in[q] - m) * (chi ? chi->values()[q] : 1.0);
        }
    ScalarField particular = spectral::invert_laplacian_div2(windowed);
    // div^2 of a periodic field has no mean mode, so no compensator
    return make_ball_field(problem.center, problem.r0, std::move(particular), 0.0, plan);
}

/// Solve Laplace(w) = div F in B_{r0}, w = 0 on the sphere.
inline BallField solve_dirichlet_div(const BallProblem& problem, const SamplingPlan& plan) {
    problem.validate();
    const auto* F = std::get_if<VectorField>(&problem.source);
    if (!F) throw ConfigError("solve_dirichlet_div needs a div-form source");
    const Grid& grid = F->grid();
    // div ignores the mean vector, same treatment as the tensor case
    VectorField windowed(grid);
    auto band = detail::cutoff_band(problem.r0, grid.box_length());
    std::optional<ScalarField> chi;
    if (band) chi = radial_cutoff(grid, problem.center, band->first, band->second);
    for (int d = 0; d < 3; ++d) {
        auto& out = windowed[d].values();
        const auto& in = (*F)[d].values();
        const double m = (*F)[d].mean();
        for (std::size_t q = 0; q < out.size(); ++q)
            out[q] = (in[q] - m) * (chi ? chi->values()[q] : 1.0);
    }
    ScalarField particular = spectral::invert_laplacian_div(windowed);
    return make_ball_field(problem.center, problem.r0, std::move(particular), 0.0, plan);
}

/// Solve Laplace(w) = s in B_{r0}, w = 0 on the sphere, for a pointwise
/// periodic source; the dropped mean mode is restored by the quadratic
/// compensator so the PDE holds exactly on the ball.
inline BallField solve_dirichlet_source(const Vec3& center, double r0, const ScalarField& source,
                                        const SamplingPlan& plan) {
    if (!source.all_finite()) throw SingularSource("source contains non-finite values");
    const Grid& grid = source.grid();
    ScalarField windowed = source;
    if (auto band = detail::cutoff_band(r0, grid.box_length())) {
        ScalarField chi = radial_cutoff(grid, center, band->first, band->second);
        auto& out = windowed.values();
        const auto& cv = chi.values();
        for (std::size_t q = 0; q < out.size(); ++q) out[q] *= cv[q];
    }
    const double m = windowed.mean();
    ScalarField particular = spectral::invert_laplacian(windowed);
    return make_ball_field(center, r0, std::move(particular), m, plan);
}

/// Zero-mean periodic solution of Laplace(w) = source (mean subtracted).
inline ScalarField solve_poisson_periodic(const ScalarField& source) {
    return spectral::invert_laplacian(source);
}

/// The proof picks r0 in [1/2, 3/4] by Fubini; the harness either fixes
/// 5/8 or scans 8 candidates, taking the one minimizing the boundary
/// p-average of `data`.
inline double choose_ball_radius(const ScalarField& data, const Vec3& center, double p,
                                 const SamplingPlan& plan, bool scan = false) {
    if (!scan) return 0.625;
    double best_r = 0.5, best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 8; ++i) {
        const double r = 0.5 + 0.25 * i / 7.0;
        const double v = sphere_average(data, center, r, p, plan);
        if (v < best_v) {
            best_v = v;
            best_r = r;
        }
    }
    return best_r;
}

}  // namespace elliptic
}  // namespace nspr
