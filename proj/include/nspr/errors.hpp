#pragma once

#include <stdexcept>
#include <string>

namespace nspr {

/// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A ball or cylinder does not fit inside the periodic box.
struct RadiusTooLarge : Error {
    explicit RadiusTooLarge(const std::string& what) : Error(what) {}
};

/// A parabolic cylinder's time interval is not covered by the trajectory.
struct TimeRangeUnavailable : Error {
    explicit TimeRangeUnavailable(const std::string& what) : Error(what) {}
};

/// Evaluation point lies outside the ball of a ball-domain problem.
struct PointOutsideBall : Error {
    explicit PointOutsideBall(const std::string& what) : Error(what) {}
};

/// Source data contains NaN or Inf.
struct SingularSource : Error {
    explicit SingularSource(const std::string& what) : Error(what) {}
};

/// Harmonicity residual check failed on an input that was declared harmonic.
struct NotHarmonic : Error {
    explicit NotHarmonic(const std::string& what) : Error(what) {}
};

/// Time step exceeds the advective CFL bound.
struct CflViolation : Error {
    CflViolation(double dt, double limit, double umax)
        : Error("CFL violation: dt=" + std::to_string(dt) + " exceeds 0.5*h/max|u|=" +
                std::to_string(limit) + " (max|u|=" + std::to_string(umax) + ")"),
          max_velocity(umax) {}
    double max_velocity;
};

/// max|u| crossed the blow-up guard during time stepping.
struct BlowupDetected : Error {
    explicit BlowupDetected(double umax)
        : Error("blow-up detected: max|u|=" + std::to_string(umax)), max_velocity(umax) {}
    double max_velocity;
};

/// Test-function support sticks out of the sampled space-time domain.
struct SupportOutOfDomain : Error {
    explicit SupportOutOfDomain(const std::string& what) : Error(what) {}
};

/// A requested scale falls below the resolvable grid limit.
struct ScaleUnderResolved : Error {
    explicit ScaleUnderResolved(const std::string& what) : Error(what) {}
};

/// Malformed configuration or CLI usage.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace nspr
