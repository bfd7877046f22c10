#include "mfc/scenario.hpp"

#include "mfc/bank.hpp"
#include "mfc/config_json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>

namespace mfc {

std::string to_string(ControllerKind kind) {
    switch (kind) {
    case ControllerKind::classic_pi: return "pi";
    case ControllerKind::ipi: return "ipi";
    case ControllerKind::istar_pi: return "istar_pi";
    }
    throw ConfigError("unknown controller kind");
}

ControllerKind controller_kind_from_string(const std::string& name) {
    if (name == "pi" || name == "classic_pi") return ControllerKind::classic_pi;
    if (name == "ipi") return ControllerKind::ipi;
    if (name == "istar_pi" || name == "istar") return ControllerKind::istar_pi;
    throw ConfigError("unknown controller kind: " + name);
}

void ControllerSpec::validate() const {
    switch (kind) {
    case ControllerKind::classic_pi:
        if (pi.windup_limit && !(*pi.windup_limit > 0.0)) {
            throw ConfigError("windup_limit must be > 0");
        }
        break;
    case ControllerKind::ipi:
        ipi.ultra.validate();
        if (ipi.corrector.windup_limit && !(*ipi.corrector.windup_limit > 0.0)) {
            throw ConfigError("windup_limit must be > 0");
        }
        if (ipi.deriv_smoothing &&
            !(*ipi.deriv_smoothing > 0.0 && *ipi.deriv_smoothing <= 1.0)) {
            throw ConfigError("deriv_smoothing must lie in (0, 1]");
        }
        break;
    case ControllerKind::istar_pi:
        istar.validate();
        break;
    }
}

ScheduleState apply_schedule(const SwitchingSchedule& schedule, double t) {
    ScheduleState state;
    state.plant_index = schedule.initial_index;
    for (const auto& e : schedule.events) {
        if (e.time > t) {
            break;
        }
        state.plant_index = e.plant_index;
        if (e.output_delay) state.delays.output_delay = *e.output_delay;
        if (e.state_delay) state.delays.state_delay = *e.state_delay;
    }
    return state;
}

void ScenarioConfig::validate() const {
    if (!(ts > 0.0)) throw ConfigError("ts must be > 0");
    if (!(horizon > 0.0)) throw ConfigError("horizon must be > 0");
    if (horizon / ts > 1e8) throw ConfigError("horizon/ts exceeds the 1e8 sample guard");
    if (bank.empty()) throw ConfigError("bank must not be empty");
    for (const auto& sys : bank) {
        sys.validate();
    }
    const auto check_index = [&](int idx) {
        if (idx < 0 || idx >= static_cast<int>(bank.size())) {
            throw ConfigError("schedule index out of range: " + std::to_string(idx));
        }
    };
    check_index(schedule.initial_index);
    double prev_time = -std::numeric_limits<double>::infinity();
    for (const auto& e : schedule.events) {
        if (!(e.time >= 0.0)) throw ConfigError("schedule event times must be >= 0");
        if (!(e.time > prev_time)) {
            throw ConfigError("schedule event times must be strictly increasing");
        }
        prev_time = e.time;
        check_index(e.plant_index);
        if (e.output_delay && *e.output_delay < 0.0) {
            throw ConfigError("schedule output_delay must be >= 0");
        }
        if (e.state_delay && *e.state_delay < 0.0) {
            throw ConfigError("schedule state_delay must be >= 0");
        }
    }
    reference.validate();
    controller.validate();
    if (actuator_limit && !(*actuator_limit > 0.0)) {
        throw ConfigError("actuator_limit must be > 0");
    }
}

namespace {

double capacity_horizon_for(const ScenarioConfig& config) {
    double cap = 0.0;
    for (const auto& sys : config.bank) {
        cap = std::max(cap, sys.output_delay);
        if (sys.state_delay) cap = std::max(cap, sys.state_delay->tau);
    }
    for (const auto& e : config.schedule.events) {
        if (e.output_delay) cap = std::max(cap, *e.output_delay);
        if (e.state_delay) cap = std::max(cap, *e.state_delay);
    }
    // Margin keeps reads at exactly the maximum delay bracketed after pruning.
    return cap + 2.0 * config.ts;
}

} // namespace

SimTrace run_closed_loop(const ScenarioConfig& config) {
    config.validate();
    const auto wall_start = std::chrono::steady_clock::now();

    SimTrace trace;
    trace.scenario_name = config.name;
    trace.config_digest = scenario_digest(config);

    const int initial = config.schedule.initial_index;
    PlantRuntime rt = make_runtime(config.bank[initial], initial, capacity_horizon_for(config),
                                   Vector::Zero(config.bank[initial].order()));
    EffectiveDelays delays;
    ControllerSpec ctrl = config.controller;

    // The loop labels samples with t_k = k*ts computed fresh (no accumulated
    // drift); the runtime accumulates the same ts per step so its history
    // timestamps agree with these labels to the last bit.
    const auto total = static_cast<std::int64_t>(std::floor(config.horizon / config.ts + 1e-9));
    trace.rows.reserve(static_cast<std::size_t>(total) + 1);
    std::size_t next_event = 0;
    const double edge_slack = config.ts * 1e-9;

    for (std::int64_t k = 0; k <= total; ++k) {
        const double t_k = static_cast<double>(k) * config.ts;

        while (next_event < config.schedule.events.size() &&
               config.schedule.events[next_event].time <= t_k + edge_slack) {
            const ScheduleEvent& e = config.schedule.events[next_event];
            switch_active(rt, config.bank, e.plant_index);
            if (e.output_delay) delays.output_delay = *e.output_delay;
            if (e.state_delay) delays.state_delay = *e.state_delay;
            ++next_event;
        }

        const StateSpaceSystem& sys = config.bank[static_cast<std::size_t>(rt.active_index)];
        const double y_k = plant_output(sys, rt, delays);
        const double yref_k = reference_eval(config.reference, t_k);
        const double eps_k = yref_k - y_k;

        double u_k = 0.0;
        double gain_value = 0.0;
        try {
            switch (ctrl.kind) {
            case ControllerKind::classic_pi:
                u_k = classic_pi_update(ctrl.pi, eps_k, config.ts);
                gain_value = u_k;
                break;
            case ControllerKind::ipi: {
                // The window still ends at y_{k-1}: the recursion uses the
                // previous sample's output derivative.
                const DerivativeEstimate deriv = ctrl.ipi.output_derivative(config.ts);
                const double yref_deriv =
                    reference_derivative(config.reference, t_k, ctrl.ipi.ultra.order_n);
                u_k = ipi_update(ctrl.ipi, deriv.value, yref_deriv, eps_k, config.ts);
                gain_value = ctrl.ipi.corrector.kp * eps_k +
                             ctrl.ipi.corrector.ki * ctrl.ipi.corrector.integral_state;
                ctrl.ipi.push_output(y_k);
                break;
            }
            case ControllerKind::istar_pi:
                u_k = istar_update(ctrl.istar, y_k, yref_k, t_k, config.ts);
                gain_value = ctrl.istar.last_gain_value;
                break;
            }
        } catch (const ControllerFault&) {
            // Unbounded feedback is reported like plant divergence: the trace
            // ends at the last recorded sample.
            trace.diverged = true;
            trace.divergence_time = t_k;
            break;
        }

        if (config.actuator_limit) {
            const double lim = *config.actuator_limit;
            const double clamped = std::clamp(u_k, -lim, lim);
            if (clamped != u_k) {
                u_k = clamped;
                // The recursion must continue from the input the plant got.
                if (ctrl.kind == ControllerKind::ipi) ctrl.ipi.u_prev = u_k;
                if (ctrl.kind == ControllerKind::istar_pi) ctrl.istar.u_prev = u_k;
            }
        }

        const double tau_eff =
            sys.state_delay ? delays.state_delay_for(sys) : delays.output_delay_for(sys);
        trace.rows.push_back(
            {t_k, yref_k, y_k, u_k, eps_k, rt.active_index, tau_eff, gain_value});

        if (k < total) {
            const ZohResult step = zoh_step(sys, rt, u_k, config.ts, delays);
            if (step.diverged) {
                trace.diverged = true;
                trace.divergence_time = step.blowup_time;
                break;
            }
        }
    }

    trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return trace;
}

namespace {

ReferenceTrajectory unit_step() {
    ReferenceTrajectory ref;
    ref.kind = ReferenceKind::step;
    ref.amplitude = 1.0;
    ref.onset = 0.0;
    return ref;
}

ScheduleEvent switch_to(double time, const char* label) {
    ScheduleEvent e;
    e.time = time;
    e.plant_index = builtin_bank_index(label);
    return e;
}

ScheduleEvent output_delay_event(double time, const char* label, double delay) {
    ScheduleEvent e = switch_to(time, label);
    e.output_delay = delay;
    return e;
}

ScheduleEvent state_delay_event(double time, const char* label, double delay) {
    ScheduleEvent e = switch_to(time, label);
    e.state_delay = delay;
    return e;
}

ScenarioConfig base_scenario(std::string name, const char* initial_label,
                             std::vector<ScheduleEvent> events, double ts, double horizon) {
    ScenarioConfig config;
    config.name = std::move(name);
    config.bank = builtin_bank();
    config.schedule.initial_index = builtin_bank_index(initial_label);
    config.schedule.events = std::move(events);
    config.reference = unit_step();
    config.ts = ts;
    config.horizon = horizon;
    return config;
}

struct IStarDefaults {
    double k_i;
    double lambda0;
};

struct PiDefaults {
    double kp;
    double ki;
};

struct IPiDefaults {
    double alpha;
    int order_n;
    double kp;
    double ki;
};

// Frozen per-scenario tunings. The recursion bootstraps from u_0 = 0, so the
// constant Lambda is negative: the first update is u_1 = G_1 * (-lambda) * eps_1,
// which pushes u toward the reference for positive error.
//
// The two gains trade off against each other through the sample period. Near
// steady state the recursion behaves like an integrator of gain |lambda|/ts
// plus a double integrator of gain k_i/ts, so k_i sets the total error area
// the gain function must accumulate before G locks at 1 (integral of eps at
// lock equals 1/k_i) while |lambda| carries the tracking effort while G is
// still below 1. Values were selected by grid search over each scenario:
// every entry below keeps the trace bounded, re-enters the 2% band after
// every schedule event, and leaves no divergence mark.
IStarDefaults istar_defaults(const std::string& name) {
    if (name == "fig1") return {15.0, -0.2};
    if (name == "fig2") return {5.0, -16.0};
    if (name == "fig3") return {10.0, -4.0};
    if (name == "fig4") return {1.75, -6.0};
    if (name == "fig1td") return {15.0, -1.0};
    if (name == "fig2td") return {6.0, -12.0};
    if (name == "fig5td") return {30.0, -4.0};
    if (name == "fig6td") return {10.0, -8.0};
    throw ConfigError("no tuned defaults for scenario: " + name);
}

PiDefaults pi_defaults(const std::string& name) {
    if (name == "fig1" || name == "fig1td" || name == "fig2td") return {1.5, 30.0};
    if (name == "fig2") return {2.0, 200.0};
    if (name == "fig3") return {3.0, 50.0};
    if (name == "fig4") return {0.5, 5.0};
    if (name == "fig5td") return {4.0, 800.0};
    if (name == "fig6td") return {2.0, 30.0};
    throw ConfigError("no tuned defaults for scenario: " + name);
}

// The alpha values look large next to the classic gains because the
// derivative-matching term contributes roughly 1/(alpha * ts) of proportional
// action per sample; at ts = 1e-4 an alpha of a few thousand lands in the
// same effective range as a classic proportional gain of a few units.
IPiDefaults ipi_defaults(const std::string& name) {
    if (name == "fig1") return {10000.0, 1, 0.02, 0.1};
    if (name == "fig2") return {5000.0, 1, 0.01, 0.1};
    if (name == "fig3" || name == "fig1td" || name == "fig2td") return {2500.0, 1, 0.002, 0.1};
    if (name == "fig4") return {500.0, 1, 0.005, 0.5};
    if (name == "fig5td") return {25.0, 1, 4.0, 60.0};
    if (name == "fig6td") return {10.0, 1, 1.0, 5.0};
    throw ConfigError("no tuned defaults for scenario: " + name);
}

} // namespace

ControllerSpec builtin_controller_spec(const std::string& scenario_name, ControllerKind kind) {
    ControllerSpec spec;
    spec.kind = kind;
    switch (kind) {
    case ControllerKind::classic_pi: {
        const PiDefaults d = pi_defaults(scenario_name);
        spec.pi.kp = d.kp;
        spec.pi.ki = d.ki;
        break;
    }
    case ControllerKind::ipi: {
        const IPiDefaults d = ipi_defaults(scenario_name);
        spec.ipi.ultra.alpha = d.alpha;
        spec.ipi.ultra.order_n = d.order_n;
        spec.ipi.corrector.kp = d.kp;
        spec.ipi.corrector.ki = d.ki;
        break;
    }
    case ControllerKind::istar_pi: {
        const IStarDefaults d = istar_defaults(scenario_name);
        spec.istar.gain.mode = GainMode::integrator;
        spec.istar.gain.k_i = d.k_i;
        spec.istar.lambda.kind = LambdaKind::constant;
        spec.istar.lambda.value = d.lambda0;
        spec.istar.delta1 = 1.0;
        spec.istar.delta2 = 1.0;
        spec.istar.composition = IStarComposition::multiplicative;
        break;
    }
    }
    return spec;
}

std::vector<ScenarioConfig> builtin_scenarios() {
    std::vector<ScenarioConfig> all;

    all.push_back(base_scenario(
        "fig1", "sigma2", {switch_to(0.01, "sigma4"), switch_to(0.05, "sigma1")}, 1e-4, 0.1));
    all.push_back(base_scenario(
        "fig2", "sigma2", {switch_to(0.025, "sigma3"), switch_to(0.072, "sigma5")}, 1e-4, 0.1));
    all.push_back(base_scenario(
        "fig3", "sigma1",
        {switch_to(0.018, "sigma2"), switch_to(0.035, "sigma4"), switch_to(0.072, "sigma5")},
        1e-4, 0.1));
    all.push_back(base_scenario(
        "fig4", "sigma6", {switch_to(0.35, "sigma8"), switch_to(0.58, "sigma7")}, 1e-3, 1.0));

    // Delay-change runs: the measurement path starts 2 ms late and lengthens
    // to 4 ms at t = 0.06 while the plant keeps switching around it.
    all.push_back(base_scenario(
        "fig1td", "sigma2",
        {output_delay_event(0.0, "sigma2", 0.002), switch_to(0.015, "sigma4"),
         switch_to(0.055, "sigma1"), output_delay_event(0.06, "sigma1", 0.004)},
        1e-4, 0.1));
    all.push_back(base_scenario(
        "fig2td", "sigma2",
        {output_delay_event(0.0, "sigma2", 0.002), switch_to(0.025, "sigma4"),
         output_delay_event(0.06, "sigma4", 0.004), switch_to(0.072, "sigma1")},
        1e-4, 0.1));

    ScenarioConfig fig5td =
        base_scenario("fig5td", "sigma1td", {state_delay_event(0.0, "sigma1td", kTau1)},
                      1e-3, 1.0);
    fig5td.reference.kind = ReferenceKind::exponential_approach;
    fig5td.reference.amplitude = 1.0;
    fig5td.reference.time_constant = 0.15;
    all.push_back(std::move(fig5td));

    all.push_back(base_scenario(
        "fig6td", "sigma2td",
        {state_delay_event(0.0, "sigma2td", kTau3), state_delay_event(0.2, "sigma1td", kTau1),
         state_delay_event(0.6, "sigma1td", kTau2), state_delay_event(0.8, "sigma1td", kTau3)},
        1e-3, 1.2));

    for (auto& config : all) {
        config.controller = builtin_controller_spec(config.name, ControllerKind::istar_pi);
    }
    return all;
}

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> names;
    for (const auto& config : builtin_scenarios()) {
        names.push_back(config.name);
    }
    return names;
}

ScenarioConfig builtin_scenario(const std::string& name) {
    for (auto& config : builtin_scenarios()) {
        if (config.name == name) {
            return config;
        }
    }
    throw ConfigError("unknown scenario: " + name);
}

} // namespace mfc
