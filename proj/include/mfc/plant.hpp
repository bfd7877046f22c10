#pragma once

#include "mfc/delay_line.hpp"
#include "mfc/state_space.hpp"

#include <optional>
#include <vector>

namespace mfc {

/// Per-run overrides for the active plant's delays. Unset fields fall back to
/// the system's own values, so a schedule can retune a delay without cloning
/// the bank entry.
struct EffectiveDelays {
    std::optional<double> output_delay;
    std::optional<double> state_delay;

    double output_delay_for(const StateSpaceSystem& sys) const {
        return output_delay ? *output_delay : sys.output_delay;
    }
    double state_delay_for(const StateSpaceSystem& sys) const {
        if (state_delay) return *state_delay;
        return sys.state_delay ? sys.state_delay->tau : 0.0;
    }
};

/// Mutable simulation state for the active plant. The state history feeds
/// delayed-state terms; the output history records the instantaneous output
/// C x(t), which is what a delayed measurement taps. Both survive switches,
/// so delayed reads reach back across regime changes.
struct PlantRuntime {
    int active_index = 0;
    Vector state;
    double time = 0.0;
    DelayLine state_history;
    DelayLine output_history;
};

/// Builds a runtime seeded at t = 0 with state x0. The capacity horizon must
/// cover every delay the run will ever use.
PlantRuntime make_runtime(const StateSpaceSystem& sys, int index, double capacity_horizon,
                          const Vector& x0);

struct ZohResult {
    Vector next_state;
    double y = 0.0;
    bool diverged = false;
    double blowup_time = 0.0;
};

/// Measured output at the runtime's current time, honoring the effective
/// output delay. With zero delay this is exactly C x (no interpolation).
double plant_output(const StateSpaceSystem& sys, const PlantRuntime& rt,
                    const EffectiveDelays& delays = {});

/// Advances one sampling period under a held input (classic RK4; delayed
/// state arguments come from the interpolated history, frozen per stage).
/// On a finite result the runtime's state, time and histories advance; on
/// divergence the runtime is left at the last finite sample and the result
/// carries the blow-up time.
ZohResult zoh_step(const StateSpaceSystem& sys, PlantRuntime& rt, double u, double ts,
                   const EffectiveDelays& delays = {});

/// Activates bank entry p. The state carries over when the dimension
/// matches and resets to zero otherwise; histories are never cleared.
void switch_active(PlantRuntime& rt, const std::vector<StateSpaceSystem>& bank, int p);

} // namespace mfc
