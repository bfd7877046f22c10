#pragma once

#include "mfc/state_space.hpp"

#include <vector>

namespace mfc {

/// Configurable delays for the delayed-state bank entries, in seconds.
inline constexpr double kTau1 = 0.02;
inline constexpr double kTau2 = 0.05;
inline constexpr double kTau3 = 0.10;

/// Ten stable SISO plants, all with unit DC gain so a unit-step setpoint is
/// meaningful across switches:
///
///   index  label     dynamics
///   0      sigma1    50/(s+50)                         fast first-order
///   1      sigma2    6400/(s^2+144s+6400)              fast second-order, well damped
///   2      sigma3    4800(1-s/150)/((s+40)(s+120))     fast, right-half-plane zero
///   3      sigma4    5000(1-s/80)/((s+50)(s+100))      fast, right-half-plane zero
///   4      sigma5    10000/(s^2+90s+10000)             fast second-order, underdamped
///   5      sigma6    8/(s+8)                           slow first-order
///   6      sigma7    144/(s^2+20.4s+144)               slow second-order
///   7      sigma8    60(1-s/15)/((s+5)(s+12))          slow, right-half-plane zero
///   8      sigma1td  x' = -4x - 2x(t-tau) + 6u         scalar delayed state
///   9      sigma2td  x'' = -49x - 11.2x' - 12x(t-tau) + 61u   delayed stiffness
///
/// The delayed entries default to tau1 and tau3; schedules retune tau at run
/// time. Both satisfy a delay-independent stability bound (the instantaneous
/// part dominates the delayed gain on the imaginary axis), so any tau >= 0
/// keeps them stable.
std::vector<StateSpaceSystem> builtin_bank();

/// Index of a label in the builtin bank. Throws ConfigError for unknown labels.
int builtin_bank_index(const std::string& label);

/// True if the entry's transfer function has a right-half-plane zero
/// (its step response starts with an undershoot).
bool has_rhp_zero(const StateSpaceSystem& sys);

/// Rough dominant time constant (seconds) from the slowest mode of A.
double dominant_time_constant(const StateSpaceSystem& sys);

} // namespace mfc
