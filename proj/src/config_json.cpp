#include "mfc/config_json.hpp"

#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <string>

namespace mfc {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config: " + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail(path, "unknown key '" + item.key() + "'");
        }
    }
}

const json& member(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path, std::string("missing required key '") + key + "'");
    }
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) {
        fail(path, "expected a string");
    }
    return v.get<std::string>();
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_number(*it, path + "." + key);
}

Vector parse_vector(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) {
        fail(path, "expected a non-empty array of numbers");
    }
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = as_number(v[i], path);
    }
    return out;
}

Matrix parse_matrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) {
        fail(path, "expected a non-empty array of rows");
    }
    const std::size_t rows = v.size();
    if (!v[0].is_array() || v[0].empty()) {
        fail(path, "expected each row to be a non-empty array");
    }
    const std::size_t cols = v[0].size();
    Matrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!v[r].is_array() || v[r].size() != cols) {
            fail(path, "rows must all have the same length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                as_number(v[r][c], path);
        }
    }
    return out;
}

std::vector<std::pair<double, double>> parse_pairs(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) {
        fail(path, "expected a non-empty array of [time, value] pairs");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(v.size());
    for (const auto& entry : v) {
        if (!entry.is_array() || entry.size() != 2) {
            fail(path, "each entry must be a [time, value] pair");
        }
        out.emplace_back(as_number(entry[0], path), as_number(entry[1], path));
    }
    return out;
}

json dump_vector(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

json dump_row_vector(const RowVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

json dump_matrix(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        out.push_back(std::move(row));
    }
    return out;
}

json dump_pairs(const std::vector<std::pair<double, double>>& pairs) {
    json out = json::array();
    for (const auto& [t, v] : pairs) {
        out.push_back(json::array({t, v}));
    }
    return out;
}

IntegrationRule parse_rule(const json& v, const std::string& path) {
    const std::string name = as_string(v, path);
    if (name == "rectangular") return IntegrationRule::rectangular;
    if (name == "trapezoidal") return IntegrationRule::trapezoidal;
    fail(path, "expected 'rectangular' or 'trapezoidal'");
}

StateSpaceSystem parse_system(const json& v, const std::string& path) {
    check_keys(v, path, {"label", "a", "b", "c", "output_delay", "state_delay", "description"});
    StateSpaceSystem sys;
    sys.label = as_string(member(v, path, "label"), path + ".label");
    sys.a_matrix = parse_matrix(member(v, path, "a"), path + ".a");
    sys.b_vector = parse_vector(member(v, path, "b"), path + ".b");
    const Vector c = parse_vector(member(v, path, "c"), path + ".c");
    sys.c_vector = c.transpose();
    sys.output_delay = number_or(v, path, "output_delay", 0.0);
    if (const auto it = v.find("state_delay"); it != v.end()) {
        const std::string sd_path = path + ".state_delay";
        check_keys(*it, sd_path, {"a_tau", "tau"});
        StateDelay sd;
        sd.a_tau = parse_matrix(member(*it, sd_path, "a_tau"), sd_path + ".a_tau");
        sd.tau = as_number(member(*it, sd_path, "tau"), sd_path + ".tau");
        sys.state_delay = std::move(sd);
    }
    if (const auto it = v.find("description"); it != v.end()) {
        sys.description = as_string(*it, path + ".description");
    }
    sys.validate();
    return sys;
}

SwitchingSchedule parse_schedule(const json& v, const std::string& path) {
    check_keys(v, path, {"initial_index", "events"});
    SwitchingSchedule schedule;
    if (const auto it = v.find("initial_index"); it != v.end()) {
        schedule.initial_index = as_int(*it, path + ".initial_index");
    }
    if (const auto it = v.find("events"); it != v.end()) {
        if (!it->is_array()) {
            fail(path + ".events", "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string ev_path = path + ".events[" + std::to_string(i) + "]";
            const json& ev = (*it)[i];
            check_keys(ev, ev_path, {"time", "plant_index", "output_delay", "state_delay"});
            ScheduleEvent event;
            event.time = as_number(member(ev, ev_path, "time"), ev_path + ".time");
            event.plant_index =
                as_int(member(ev, ev_path, "plant_index"), ev_path + ".plant_index");
            if (const auto d = ev.find("output_delay"); d != ev.end()) {
                event.output_delay = as_number(*d, ev_path + ".output_delay");
            }
            if (const auto d = ev.find("state_delay"); d != ev.end()) {
                event.state_delay = as_number(*d, ev_path + ".state_delay");
            }
            schedule.events.push_back(event);
        }
    }
    return schedule;
}

ReferenceTrajectory parse_reference(const json& v, const std::string& path) {
    if (!v.is_object()) {
        fail(path, "expected an object");
    }
    ReferenceTrajectory ref;
    const std::string kind = as_string(member(v, path, "kind"), path + ".kind");
    if (kind == "step") {
        check_keys(v, path, {"kind", "amplitude", "onset"});
        ref.kind = ReferenceKind::step;
        ref.amplitude = number_or(v, path, "amplitude", 1.0);
        ref.onset = number_or(v, path, "onset", 0.0);
    } else if (kind == "ramp") {
        check_keys(v, path, {"kind", "slope"});
        ref.kind = ReferenceKind::ramp;
        ref.slope = as_number(member(v, path, "slope"), path + ".slope");
    } else if (kind == "exponential_approach") {
        check_keys(v, path, {"kind", "amplitude", "time_constant"});
        ref.kind = ReferenceKind::exponential_approach;
        ref.amplitude = number_or(v, path, "amplitude", 1.0);
        ref.time_constant =
            as_number(member(v, path, "time_constant"), path + ".time_constant");
    } else if (kind == "piecewise") {
        check_keys(v, path, {"kind", "segments"});
        ref.kind = ReferenceKind::piecewise;
        ref.segments = parse_pairs(member(v, path, "segments"), path + ".segments");
    } else {
        fail(path + ".kind", "unknown reference kind '" + kind + "'");
    }
    ref.validate();
    return ref;
}

GainFunction parse_gain(const json& v, const std::string& path) {
    GainFunction gain;
    const std::string mode = as_string(member(v, path, "mode"), path + ".mode");
    if (mode == "integrator") {
        check_keys(v, path, {"mode", "k_i", "rule"});
        gain.mode = GainMode::integrator;
        gain.k_i = as_number(member(v, path, "k_i"), path + ".k_i");
    } else if (mode == "pure_gain") {
        check_keys(v, path, {"mode", "k_gain", "rule"});
        gain.mode = GainMode::pure_gain;
        gain.k_gain = as_number(member(v, path, "k_gain"), path + ".k_gain");
    } else {
        fail(path + ".mode", "unknown gain mode '" + mode + "'");
    }
    if (const auto it = v.find("rule"); it != v.end()) {
        gain.rule = parse_rule(*it, path + ".rule");
    }
    return gain;
}

LambdaProfile parse_lambda(const json& v, const std::string& path) {
    LambdaProfile lambda;
    const std::string kind = as_string(member(v, path, "kind"), path + ".kind");
    if (kind == "constant") {
        check_keys(v, path, {"kind", "value"});
        lambda.kind = LambdaKind::constant;
        lambda.value = as_number(member(v, path, "value"), path + ".value");
    } else if (kind == "exp_decay") {
        check_keys(v, path, {"kind", "value", "time_constant"});
        lambda.kind = LambdaKind::exp_decay;
        lambda.value = as_number(member(v, path, "value"), path + ".value");
        lambda.time_constant =
            as_number(member(v, path, "time_constant"), path + ".time_constant");
    } else if (kind == "piecewise_constant") {
        check_keys(v, path, {"kind", "breakpoints"});
        lambda.kind = LambdaKind::piecewise_constant;
        lambda.breakpoints = parse_pairs(member(v, path, "breakpoints"), path + ".breakpoints");
    } else {
        fail(path + ".kind", "unknown lambda kind '" + kind + "'");
    }
    lambda.validate();
    return lambda;
}

ControllerSpec parse_controller(const json& v, const std::string& path) {
    if (!v.is_object()) {
        fail(path, "expected an object (or a builtin controller kind string)");
    }
    ControllerSpec spec;
    const std::string kind = as_string(member(v, path, "kind"), path + ".kind");
    if (kind == "pi" || kind == "classic_pi") {
        check_keys(v, path, {"kind", "kp", "ki", "windup_limit", "rule"});
        spec.kind = ControllerKind::classic_pi;
        spec.pi.kp = as_number(member(v, path, "kp"), path + ".kp");
        spec.pi.ki = as_number(member(v, path, "ki"), path + ".ki");
        if (const auto it = v.find("windup_limit"); it != v.end()) {
            spec.pi.windup_limit = as_number(*it, path + ".windup_limit");
        }
        if (const auto it = v.find("rule"); it != v.end()) {
            spec.pi.rule = parse_rule(*it, path + ".rule");
        }
    } else if (kind == "ipi") {
        check_keys(v, path,
                   {"kind", "alpha", "order_n", "kp", "ki", "windup_limit", "rule",
                    "deriv_smoothing"});
        spec.kind = ControllerKind::ipi;
        spec.ipi.ultra.alpha = as_number(member(v, path, "alpha"), path + ".alpha");
        spec.ipi.ultra.order_n = as_int(member(v, path, "order_n"), path + ".order_n");
        spec.ipi.corrector.kp = as_number(member(v, path, "kp"), path + ".kp");
        spec.ipi.corrector.ki = as_number(member(v, path, "ki"), path + ".ki");
        if (const auto it = v.find("windup_limit"); it != v.end()) {
            spec.ipi.corrector.windup_limit = as_number(*it, path + ".windup_limit");
        }
        if (const auto it = v.find("rule"); it != v.end()) {
            spec.ipi.corrector.rule = parse_rule(*it, path + ".rule");
        }
        if (const auto it = v.find("deriv_smoothing"); it != v.end()) {
            spec.ipi.deriv_smoothing = as_number(*it, path + ".deriv_smoothing");
        }
    } else if (kind == "istar_pi" || kind == "istar") {
        check_keys(v, path, {"kind", "gain", "lambda", "delta1", "delta2", "composition"});
        spec.kind = ControllerKind::istar_pi;
        spec.istar.gain = parse_gain(member(v, path, "gain"), path + ".gain");
        spec.istar.lambda = parse_lambda(member(v, path, "lambda"), path + ".lambda");
        spec.istar.delta1 = number_or(v, path, "delta1", 1.0);
        spec.istar.delta2 = number_or(v, path, "delta2", 1.0);
        if (const auto it = v.find("composition"); it != v.end()) {
            const std::string comp = as_string(*it, path + ".composition");
            if (comp == "multiplicative") {
                spec.istar.composition = IStarComposition::multiplicative;
            } else if (comp == "cascade") {
                spec.istar.composition = IStarComposition::cascade;
            } else {
                fail(path + ".composition", "expected 'multiplicative' or 'cascade'");
            }
        }
    } else {
        fail(path + ".kind", "unknown controller kind '" + kind + "'");
    }
    spec.validate();
    return spec;
}

json dump_rule(IntegrationRule rule) {
    return rule == IntegrationRule::rectangular ? "rectangular" : "trapezoidal";
}

json dump_reference(const ReferenceTrajectory& ref) {
    json out;
    switch (ref.kind) {
    case ReferenceKind::step:
        out["kind"] = "step";
        out["amplitude"] = ref.amplitude;
        out["onset"] = ref.onset;
        break;
    case ReferenceKind::ramp:
        out["kind"] = "ramp";
        out["slope"] = ref.slope;
        break;
    case ReferenceKind::exponential_approach:
        out["kind"] = "exponential_approach";
        out["amplitude"] = ref.amplitude;
        out["time_constant"] = ref.time_constant;
        break;
    case ReferenceKind::piecewise:
        out["kind"] = "piecewise";
        out["segments"] = dump_pairs(ref.segments);
        break;
    }
    return out;
}

json dump_controller(const ControllerSpec& spec) {
    json out;
    switch (spec.kind) {
    case ControllerKind::classic_pi:
        out["kind"] = "pi";
        out["kp"] = spec.pi.kp;
        out["ki"] = spec.pi.ki;
        if (spec.pi.windup_limit) out["windup_limit"] = *spec.pi.windup_limit;
        if (spec.pi.rule != IntegrationRule::rectangular) out["rule"] = dump_rule(spec.pi.rule);
        break;
    case ControllerKind::ipi:
        out["kind"] = "ipi";
        out["alpha"] = spec.ipi.ultra.alpha;
        out["order_n"] = spec.ipi.ultra.order_n;
        out["kp"] = spec.ipi.corrector.kp;
        out["ki"] = spec.ipi.corrector.ki;
        if (spec.ipi.corrector.windup_limit) {
            out["windup_limit"] = *spec.ipi.corrector.windup_limit;
        }
        if (spec.ipi.corrector.rule != IntegrationRule::rectangular) {
            out["rule"] = dump_rule(spec.ipi.corrector.rule);
        }
        if (spec.ipi.deriv_smoothing) out["deriv_smoothing"] = *spec.ipi.deriv_smoothing;
        break;
    case ControllerKind::istar_pi: {
        out["kind"] = "istar_pi";
        json gain;
        if (spec.istar.gain.mode == GainMode::integrator) {
            gain["mode"] = "integrator";
            gain["k_i"] = spec.istar.gain.k_i;
        } else {
            gain["mode"] = "pure_gain";
            gain["k_gain"] = spec.istar.gain.k_gain;
        }
        if (spec.istar.gain.rule != IntegrationRule::rectangular) {
            gain["rule"] = dump_rule(spec.istar.gain.rule);
        }
        out["gain"] = std::move(gain);
        json lambda;
        switch (spec.istar.lambda.kind) {
        case LambdaKind::constant:
            lambda["kind"] = "constant";
            lambda["value"] = spec.istar.lambda.value;
            break;
        case LambdaKind::exp_decay:
            lambda["kind"] = "exp_decay";
            lambda["value"] = spec.istar.lambda.value;
            lambda["time_constant"] = spec.istar.lambda.time_constant;
            break;
        case LambdaKind::piecewise_constant:
            lambda["kind"] = "piecewise_constant";
            lambda["breakpoints"] = dump_pairs(spec.istar.lambda.breakpoints);
            break;
        }
        out["lambda"] = std::move(lambda);
        out["delta1"] = spec.istar.delta1;
        out["delta2"] = spec.istar.delta2;
        out["composition"] = spec.istar.composition == IStarComposition::multiplicative
                                 ? "multiplicative"
                                 : "cascade";
        break;
    }
    }
    return out;
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config: top level must be an object");
    }

    if (doc.contains("scenario")) {
        check_keys(doc, "$", {"scenario", "controller", "ts", "horizon", "actuator_limit"});
        const std::string name = as_string(doc["scenario"], "$.scenario");
        ScenarioConfig config = builtin_scenario(name);
        if (const auto it = doc.find("controller"); it != doc.end()) {
            if (it->is_string()) {
                config.controller = builtin_controller_spec(
                    name, controller_kind_from_string(it->get<std::string>()));
            } else {
                config.controller = parse_controller(*it, "$.controller");
            }
        }
        if (const auto it = doc.find("ts"); it != doc.end()) {
            config.ts = as_number(*it, "$.ts");
        }
        if (const auto it = doc.find("horizon"); it != doc.end()) {
            config.horizon = as_number(*it, "$.horizon");
        }
        if (const auto it = doc.find("actuator_limit"); it != doc.end()) {
            config.actuator_limit = as_number(*it, "$.actuator_limit");
        }
        config.validate();
        return config;
    }

    check_keys(doc, "$",
               {"name", "bank", "schedule", "reference", "controller", "ts", "horizon",
                "actuator_limit"});
    ScenarioConfig config;
    config.name = "custom";
    if (const auto it = doc.find("name"); it != doc.end()) {
        config.name = as_string(*it, "$.name");
    }
    const json& bank = member(doc, "$", "bank");
    if (!bank.is_array() || bank.empty()) {
        fail("$.bank", "expected a non-empty array of systems");
    }
    for (std::size_t i = 0; i < bank.size(); ++i) {
        config.bank.push_back(parse_system(bank[i], "$.bank[" + std::to_string(i) + "]"));
    }
    if (const auto it = doc.find("schedule"); it != doc.end()) {
        config.schedule = parse_schedule(*it, "$.schedule");
    }
    config.reference = parse_reference(member(doc, "$", "reference"), "$.reference");
    const json& controller = member(doc, "$", "controller");
    if (controller.is_string()) {
        fail("$.controller", "custom configs need a full controller object, not a kind name");
    }
    config.controller = parse_controller(controller, "$.controller");
    config.ts = number_or(doc, "$", "ts", 1e-4);
    config.horizon = number_or(doc, "$", "horizon", 0.1);
    if (const auto it = doc.find("actuator_limit"); it != doc.end()) {
        config.actuator_limit = as_number(*it, "$.actuator_limit");
    }
    config.validate();
    return config;
}

json serialize_config(const ScenarioConfig& config) {
    json doc;
    doc["name"] = config.name;

    json bank = json::array();
    for (const auto& sys : config.bank) {
        json entry;
        entry["label"] = sys.label;
        entry["a"] = dump_matrix(sys.a_matrix);
        entry["b"] = dump_vector(sys.b_vector);
        entry["c"] = dump_row_vector(sys.c_vector);
        entry["output_delay"] = sys.output_delay;
        if (sys.state_delay) {
            entry["state_delay"] = {{"a_tau", dump_matrix(sys.state_delay->a_tau)},
                                    {"tau", sys.state_delay->tau}};
        }
        if (!sys.description.empty()) {
            entry["description"] = sys.description;
        }
        bank.push_back(std::move(entry));
    }
    doc["bank"] = std::move(bank);

    json events = json::array();
    for (const auto& e : config.schedule.events) {
        json entry;
        entry["time"] = e.time;
        entry["plant_index"] = e.plant_index;
        if (e.output_delay) entry["output_delay"] = *e.output_delay;
        if (e.state_delay) entry["state_delay"] = *e.state_delay;
        events.push_back(std::move(entry));
    }
    doc["schedule"] = {{"initial_index", config.schedule.initial_index},
                       {"events", std::move(events)}};

    doc["reference"] = dump_reference(config.reference);
    doc["controller"] = dump_controller(config.controller);
    doc["ts"] = config.ts;
    doc["horizon"] = config.horizon;
    if (config.actuator_limit) {
        doc["actuator_limit"] = *config.actuator_limit;
    }
    return doc;
}

std::string scenario_digest(const ScenarioConfig& config) {
    const std::string canonical = serialize_config(config).dump();
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

} // namespace mfc
