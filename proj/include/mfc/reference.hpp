#pragma once

#include "mfc/types.hpp"

#include <vector>

namespace mfc {

enum class ReferenceKind { step, ramp, exponential_approach, piecewise };

/// The output reference y*(t):
///   step                 0 before onset, amplitude from onset on
///   ramp                 slope * t
///   exponential_approach amplitude * (1 - exp(-t/time_constant))
///   piecewise            constant segments (time, value), last one extends
struct ReferenceTrajectory {
    ReferenceKind kind = ReferenceKind::step;
    double amplitude = 1.0;
    double onset = 0.0;
    double slope = 0.0;
    double time_constant = 1.0;
    std::vector<std::pair<double, double>> segments;

    void validate() const;
};

double reference_eval(const ReferenceTrajectory& traj, double t);

/// Analytic n-th derivative of the reference (n in {1, 2}), used as the
/// feedforward term. Steps and piecewise segments differentiate to zero
/// almost everywhere; the jump instants carry no impulse here.
double reference_derivative(const ReferenceTrajectory& traj, double t, int order_n);

} // namespace mfc
