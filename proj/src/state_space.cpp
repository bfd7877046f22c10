#include "mfc/state_space.hpp"

namespace mfc {

void StateSpaceSystem::validate() const {
    const auto n = a_matrix.rows();
    if (n == 0 || a_matrix.cols() != n) {
        throw ConfigError("system '" + label + "': A must be square and non-empty");
    }
    if (b_vector.size() != n) {
        throw ConfigError("system '" + label + "': B must have one entry per state");
    }
    if (c_vector.size() != n) {
        throw ConfigError("system '" + label + "': C must have one entry per state");
    }
    if (output_delay < 0.0) {
        throw ConfigError("system '" + label + "': output_delay must be >= 0");
    }
    if (state_delay) {
        if (state_delay->a_tau.rows() != n || state_delay->a_tau.cols() != n) {
            throw ConfigError("system '" + label + "': A_tau must match the state dimension");
        }
        if (state_delay->tau < 0.0) {
            throw ConfigError("system '" + label + "': state delay tau must be >= 0");
        }
    }
}

StateSpaceSystem make_first_order(double pole, double gain, std::string label,
                                  std::string description) {
    StateSpaceSystem sys;
    sys.a_matrix = Matrix::Constant(1, 1, -pole);
    sys.b_vector = Vector::Constant(1, gain);
    sys.c_vector = RowVector::Constant(1, 1.0);
    sys.label = std::move(label);
    sys.description = std::move(description);
    return sys;
}

StateSpaceSystem make_second_order(double a1, double a0, double b1, double b0,
                                   std::string label, std::string description) {
    StateSpaceSystem sys;
    sys.a_matrix = Matrix(2, 2);
    sys.a_matrix << 0.0, 1.0,
                    -a0, -a1;
    sys.b_vector = Vector(2);
    sys.b_vector << 0.0, 1.0;
    sys.c_vector = RowVector(2);
    sys.c_vector << b0, b1;
    sys.label = std::move(label);
    sys.description = std::move(description);
    return sys;
}

} // namespace mfc
