#pragma once

#include "nspr/field.hpp"
#include "nspr/sampling.hpp"

namespace nspr {

/// (1/|B_r|) int_{B_r} |f|^p by low-discrepancy quadrature; deterministic in
/// the plan, exact on constants.
inline double ball_average(const ScalarField& f, const Vec3& center, double r, double p,
                           const SamplingPlan& plan) {
    require_ball_in_box(center, r, f.grid().box_length());
    return ball_average_of([&](const Vec3& x) { return f.sample(x); }, center, r, p, plan);
}

/// (1/|dB_r|) int_{dB_r} |f|^p d sigma.
inline double sphere_average(const ScalarField& f, const Vec3& center, double r, double p,
                             const SamplingPlan& plan) {
    require_ball_in_box(center, r, f.grid().box_length());
    return sphere_average_of([&](const Vec3& x) { return f.sample(x); }, center, r, p, plan);
}

}  // namespace nspr
