#include "mfc/reference.hpp"

#include <cmath>

namespace mfc {

void ReferenceTrajectory::validate() const {
    switch (kind) {
    case ReferenceKind::step:
        if (!std::isfinite(amplitude)) throw ConfigError("step amplitude must be finite");
        if (!std::isfinite(onset) || onset < 0.0) throw ConfigError("step onset must be >= 0");
        break;
    case ReferenceKind::ramp:
        if (!std::isfinite(slope)) throw ConfigError("ramp slope must be finite");
        break;
    case ReferenceKind::exponential_approach:
        if (!std::isfinite(amplitude)) throw ConfigError("exponential amplitude must be finite");
        if (!(time_constant > 0.0)) throw ConfigError("exponential time_constant must be > 0");
        break;
    case ReferenceKind::piecewise:
        if (segments.empty()) throw ConfigError("piecewise reference needs >= 1 segment");
        for (std::size_t i = 0; i < segments.size(); ++i) {
            if (!std::isfinite(segments[i].second)) {
                throw ConfigError("piecewise reference values must be finite");
            }
            if (i > 0 && segments[i].first <= segments[i - 1].first) {
                throw ConfigError("piecewise reference times must be strictly increasing");
            }
        }
        break;
    }
}

double reference_eval(const ReferenceTrajectory& traj, double t) {
    switch (traj.kind) {
    case ReferenceKind::step:
        return t >= traj.onset ? traj.amplitude : 0.0;
    case ReferenceKind::ramp:
        return traj.slope * t;
    case ReferenceKind::exponential_approach:
        return traj.amplitude * (1.0 - std::exp(-t / traj.time_constant));
    case ReferenceKind::piecewise: {
        double current = traj.segments.front().second;
        for (const auto& [time, value] : traj.segments) {
            if (time <= t) {
                current = value;
            } else {
                break;
            }
        }
        return current;
    }
    }
    throw ConfigError("unknown reference kind");
}

double reference_derivative(const ReferenceTrajectory& traj, double t, int order_n) {
    if (order_n != 1 && order_n != 2) {
        throw ConfigError("reference_derivative supports order 1 or 2");
    }
    switch (traj.kind) {
    case ReferenceKind::step:
    case ReferenceKind::piecewise:
        return 0.0;
    case ReferenceKind::ramp:
        return order_n == 1 ? traj.slope : 0.0;
    case ReferenceKind::exponential_approach: {
        const double decay = std::exp(-t / traj.time_constant);
        if (order_n == 1) {
            return traj.amplitude / traj.time_constant * decay;
        }
        return -traj.amplitude / (traj.time_constant * traj.time_constant) * decay;
    }
    }
    throw ConfigError("unknown reference kind");
}

} // namespace mfc
