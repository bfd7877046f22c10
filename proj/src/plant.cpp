#include "mfc/plant.hpp"

#include <cmath>
#include <limits>

namespace mfc {
namespace {

// Delayed state read with a dimension fallback: after a regime change the
// stored samples may not match the current state dimension, in which case
// the delayed term restarts from zero history.
Vector delayed_state(const DelayLine& hist, double t, double tau, Eigen::Index n) {
    Vector v = hist.read_delayed(t, tau);
    if (v.size() != n) {
        return Vector::Zero(n);
    }
    return v;
}

} // namespace

PlantRuntime make_runtime(const StateSpaceSystem& sys, int index, double capacity_horizon,
                          const Vector& x0) {
    sys.validate();
    if (x0.size() != sys.order()) {
        throw ConfigError("initial state dimension does not match system '" + sys.label + "'");
    }
    PlantRuntime rt;
    rt.active_index = index;
    rt.state = x0;
    rt.time = 0.0;
    rt.state_history = DelayLine(capacity_horizon, x0);
    rt.state_history.append(0.0, x0);
    const double y0 = sys.c_vector.dot(x0);
    rt.output_history = DelayLine(capacity_horizon, Vector::Constant(1, y0));
    rt.output_history.append(0.0, Vector::Constant(1, y0));
    return rt;
}

double plant_output(const StateSpaceSystem& sys, const PlantRuntime& rt,
                    const EffectiveDelays& delays) {
    const double tau_o = delays.output_delay_for(sys);
    if (tau_o == 0.0) {
        return sys.c_vector.dot(rt.state);
    }
    return rt.output_history.read_delayed(rt.time, tau_o)(0);
}

ZohResult zoh_step(const StateSpaceSystem& sys, PlantRuntime& rt, double u, double ts,
                   const EffectiveDelays& delays) {
    if (ts <= 0.0) {
        throw ConfigError("zoh_step requires ts > 0");
    }
    const Eigen::Index n = sys.order();
    if (rt.state.size() != n) {
        throw ConfigError("runtime state does not match the active system '" + sys.label + "'");
    }

    const double tau_s = delays.state_delay_for(sys);
    const Matrix* a_tau = sys.state_delay ? &sys.state_delay->a_tau : nullptr;
    const double t0 = rt.time;

    // With tau == 0 the delayed term degenerates to A_tau * x(t); using the
    // stage value keeps that case exact instead of clamping into the history.
    auto deriv = [&](double t_stage, const Vector& x_stage) -> Vector {
        Vector dx = sys.a_matrix * x_stage + sys.b_vector * u;
        if (a_tau) {
            if (tau_s <= 0.0) {
                dx += *a_tau * x_stage;
            } else {
                dx += *a_tau * delayed_state(rt.state_history, t_stage, tau_s, n);
            }
        }
        return dx;
    };

    const Vector& x0 = rt.state;
    const Vector k1 = deriv(t0, x0);
    const Vector k2 = deriv(t0 + ts / 2.0, x0 + (ts / 2.0) * k1);
    const Vector k3 = deriv(t0 + ts / 2.0, x0 + (ts / 2.0) * k2);
    const Vector k4 = deriv(t0 + ts, x0 + ts * k3);
    Vector next = x0 + (ts / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    ZohResult res;
    const double t1 = t0 + ts;
    const bool state_finite = next.allFinite();
    const double y_inst = state_finite ? sys.c_vector.dot(next)
                                       : std::numeric_limits<double>::quiet_NaN();
    if (!state_finite || !std::isfinite(y_inst)) {
        // Leave the runtime at its last finite sample so callers can report
        // a truncated but usable trace.
        res.next_state = std::move(next);
        res.y = std::numeric_limits<double>::quiet_NaN();
        res.diverged = true;
        res.blowup_time = t1;
        return res;
    }

    rt.state = next;
    rt.time = t1;
    rt.state_history.append(t1, std::move(next));
    rt.output_history.append(t1, Vector::Constant(1, y_inst));
    res.next_state = rt.state;
    res.y = plant_output(sys, rt, delays);
    return res;
}

void switch_active(PlantRuntime& rt, const std::vector<StateSpaceSystem>& bank, int p) {
    if (p < 0 || p >= static_cast<int>(bank.size())) {
        throw ConfigError("switch_active: plant index out of range: " + std::to_string(p));
    }
    rt.active_index = p;
    if (rt.state.size() != bank[p].order()) {
        rt.state = Vector::Zero(bank[p].order());
    }
}

} // namespace mfc
