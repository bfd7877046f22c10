#pragma once

#include "mfc/types.hpp"

#include <optional>
#include <string>

namespace mfc {

/// Delayed-state contribution A_tau * x(t - tau) added to the state derivative.
struct StateDelay {
    Matrix a_tau;
    double tau = 0.0;
};

/// One SISO linear plant:
///   x'(t) = A x(t) + B u(t)            [ + A_tau x(t - tau) ]
///   y(t)  = C x(t - output_delay)
struct StateSpaceSystem {
    Matrix a_matrix;
    Vector b_vector;
    RowVector c_vector;
    std::optional<StateDelay> state_delay;
    double output_delay = 0.0;
    std::string label;
    std::string description;

    int order() const { return static_cast<int>(a_matrix.rows()); }

    /// Throws ConfigError on inconsistent dimensions or negative delays.
    void validate() const;
};

StateSpaceSystem make_first_order(double pole, double gain, std::string label = {},
                                  std::string description = {});

/// Controllable canonical realization of (b1 s + b0) / (s^2 + a1 s + a0).
StateSpaceSystem make_second_order(double a1, double a0, double b1, double b0,
                                   std::string label = {}, std::string description = {});

} // namespace mfc
