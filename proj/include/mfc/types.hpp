#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mfc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

/// Invalid configuration: bad dimensions, negative delays, delays beyond
/// history capacity, malformed config documents, unknown names.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A controller update was fed (or produced) a non-finite value.
class ControllerFault : public std::runtime_error {
public:
    explicit ControllerFault(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mfc
