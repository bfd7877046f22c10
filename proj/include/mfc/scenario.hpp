#pragma once

#include "mfc/controllers.hpp"
#include "mfc/plant.hpp"
#include "mfc/reference.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mfc {

/// One scheduled change: activate bank entry plant_index at `time` and,
/// when the optional fields are set, retune the effective delays from that
/// instant on. An event may keep the index and only move a delay.
struct ScheduleEvent {
    double time = 0.0;
    int plant_index = 0;
    std::optional<double> output_delay;
    std::optional<double> state_delay;
};

struct SwitchingSchedule {
    int initial_index = 0;
    std::vector<ScheduleEvent> events;
};

struct ScheduleState {
    int plant_index = 0;
    EffectiveDelays delays;
};

/// Folds every event with time <= t (closed-left boundary) over the initial
/// state and returns the active index and effective delays at t.
ScheduleState apply_schedule(const SwitchingSchedule& schedule, double t);

enum class ControllerKind { classic_pi, ipi, istar_pi };

/// Initial controller state for a run; `kind` selects which member is live.
struct ControllerSpec {
    ControllerKind kind = ControllerKind::istar_pi;
    PiGains pi;
    IPiState ipi;
    IStarConfig istar;

    void validate() const;
};

std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

struct ScenarioConfig {
    std::string name;
    std::vector<StateSpaceSystem> bank;
    SwitchingSchedule schedule;
    ReferenceTrajectory reference;
    ControllerSpec controller;
    double ts = 1e-4;
    double horizon = 0.1;
    std::optional<double> actuator_limit;

    void validate() const;
};

/// One recorded sample. `tau` is the delay in play: the effective state
/// delay when the active system has a delayed-state term, the effective
/// output delay otherwise. `gain_value` is the controller's gain-path value:
/// G(eps) for the unified controller, the PI corrector C(eps) for the others.
struct TraceRow {
    double t = 0.0;
    double y_ref = 0.0;
    double y = 0.0;
    double u = 0.0;
    double eps = 0.0;
    int p = 0;
    double tau = 0.0;
    double gain_value = 0.0;
};

struct SimTrace {
    std::vector<TraceRow> rows;
    bool diverged = false;
    double divergence_time = 0.0;
    std::string config_digest;
    double wall_seconds = 0.0;
    std::string scenario_name;
};

/// Runs the closed loop sample by sample: apply due schedule events, measure
/// y_k through the output delay, evaluate y*_k, compute u_k, clamp to the
/// actuator limit when set, then advance the plant one held-input step.
/// Deterministic: identical configs produce bit-identical traces. Divergence
/// (of the plant, or a controller fault from unbounded feedback) truncates
/// the trace and marks it instead of throwing.
SimTrace run_closed_loop(const ScenarioConfig& config);

/// The catalog of canned experiments (switching, delay-change, state-delay
/// tracking), each with a tuned default controller.
std::vector<ScenarioConfig> builtin_scenarios();
std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);

/// Tuned controller of the given kind for a named builtin scenario.
ControllerSpec builtin_controller_spec(const std::string& scenario_name, ControllerKind kind);

} // namespace mfc
