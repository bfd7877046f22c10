#include "mfc/controllers.hpp"

#include <algorithm>
#include <cmath>

namespace mfc {
namespace {

double advance_integral(double integral, double eps_k, double ts, IntegrationRule rule,
                        double& prev_eps) {
    if (rule == IntegrationRule::rectangular) {
        integral += eps_k * ts;
    } else {
        integral += 0.5 * (prev_eps + eps_k) * ts;
    }
    prev_eps = eps_k;
    return integral;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ControllerFault(std::string("non-finite ") + what);
    }
}

} // namespace

void UltraLocalConfig::validate() const {
    if (alpha == 0.0 || !std::isfinite(alpha)) {
        throw ConfigError("ultra-local alpha must be finite and nonzero");
    }
    if (order_n != 1 && order_n != 2) {
        throw ConfigError("ultra-local order_n must be 1 or 2");
    }
}

double classic_pi_update(PiGains& gains, double eps_k, double ts) {
    if (ts <= 0.0) {
        throw ConfigError("classic_pi_update requires ts > 0");
    }
    double integral = advance_integral(gains.integral_state, eps_k, ts, gains.rule,
                                       gains.prev_eps);
    if (gains.windup_limit) {
        integral = std::clamp(integral, -*gains.windup_limit, *gains.windup_limit);
    }
    gains.integral_state = integral;
    return gains.kp * eps_k + gains.ki * integral;
}

DerivativeEstimate estimate_derivative(std::span<const double> window, int order_n, double ts) {
    if (order_n != 1 && order_n != 2) {
        throw ConfigError("estimate_derivative supports order 1 or 2");
    }
    if (ts <= 0.0) {
        throw ConfigError("estimate_derivative requires ts > 0");
    }
    const std::size_t needed = static_cast<std::size_t>(order_n) + 1;
    if (window.size() < needed) {
        return {0.0, true};
    }
    const std::size_t k = window.size() - 1;
    if (order_n == 1) {
        return {(window[k] - window[k - 1]) / ts, false};
    }
    return {(window[k] - 2.0 * window[k - 1] + window[k - 2]) / (ts * ts), false};
}

double estimate_F(double y_deriv_n, double alpha, double u) {
    return y_deriv_n - alpha * u;
}

void IPiState::push_output(double y) {
    deriv_window.push_back(y);
    const std::size_t keep = static_cast<std::size_t>(ultra.order_n) + 1;
    if (deriv_window.size() > keep) {
        deriv_window.erase(deriv_window.begin(),
                           deriv_window.end() - static_cast<std::ptrdiff_t>(keep));
    }
}

DerivativeEstimate IPiState::output_derivative(double ts) {
    DerivativeEstimate est = estimate_derivative(deriv_window, ultra.order_n, ts);
    if (!deriv_smoothing) {
        return est;
    }
    if (est.warm_up) {
        smoothed_deriv = 0.0;
        return est;
    }
    smoothed_deriv += *deriv_smoothing * (est.value - smoothed_deriv);
    est.value = smoothed_deriv;
    return est;
}

double ipi_update(IPiState& state, double y_deriv_prev, double yref_deriv_k, double eps_k,
                  double ts) {
    state.ultra.validate();
    require_finite(y_deriv_prev, "output derivative");
    require_finite(yref_deriv_k, "reference derivative");
    require_finite(eps_k, "tracking error");
    const double corrector = classic_pi_update(state.corrector, eps_k, ts);
    const double u_k =
        state.u_prev - (y_deriv_prev - yref_deriv_k) / state.ultra.alpha + corrector;
    require_finite(u_k, "control output");
    state.u_prev = u_k;
    return u_k;
}

double gain_eval(GainFunction& gain, double eps_k, double ts) {
    if (ts <= 0.0) {
        throw ConfigError("gain_eval requires ts > 0");
    }
    if (gain.mode == GainMode::pure_gain) {
        return gain.k_gain;
    }
    gain.accumulator = advance_integral(gain.accumulator, eps_k, ts, gain.rule, gain.prev_eps);
    return gain.k_i * gain.accumulator;
}

void LambdaProfile::validate() const {
    switch (kind) {
    case LambdaKind::constant:
        if (!std::isfinite(value)) throw ConfigError("lambda constant value must be finite");
        break;
    case LambdaKind::exp_decay:
        if (!std::isfinite(value)) throw ConfigError("lambda initial value must be finite");
        if (!(time_constant > 0.0)) throw ConfigError("lambda time_constant must be > 0");
        break;
    case LambdaKind::piecewise_constant:
        if (breakpoints.empty()) {
            throw ConfigError("lambda breakpoint list must not be empty");
        }
        for (std::size_t i = 0; i < breakpoints.size(); ++i) {
            if (!std::isfinite(breakpoints[i].second)) {
                throw ConfigError("lambda breakpoint values must be finite");
            }
            if (i > 0 && breakpoints[i].first <= breakpoints[i - 1].first) {
                throw ConfigError("lambda breakpoint times must be strictly increasing");
            }
        }
        break;
    }
}

double lambda_eval(const LambdaProfile& profile, double t) {
    switch (profile.kind) {
    case LambdaKind::constant:
        return profile.value;
    case LambdaKind::exp_decay:
        return profile.value * std::exp(-t / profile.time_constant);
    case LambdaKind::piecewise_constant: {
        double current = profile.breakpoints.front().second;
        for (const auto& [time, value] : profile.breakpoints) {
            if (time <= t) {
                current = value;
            } else {
                break;
            }
        }
        return current;
    }
    }
    throw ConfigError("unknown lambda profile kind");
}

void IStarConfig::validate() const {
    if (!(delta1 > 0.0) || !(delta2 > 0.0)) {
        throw ConfigError("delta1 and delta2 must be > 0");
    }
    lambda.validate();
}

double istar_update(IStarConfig& cfg, double y_k, double yref_k, double t_k, double ts) {
    if (ts <= 0.0) {
        throw ConfigError("istar_update requires ts > 0");
    }
    require_finite(y_k, "measured output");
    require_finite(yref_k, "reference");
    const double eps_k = yref_k - y_k;
    const double gain_value = gain_eval(cfg.gain, eps_k, ts);
    cfg.last_gain_value = gain_value;
    const double lam = lambda_eval(cfg.lambda, t_k);
    const double core = cfg.u_prev - lam * (cfg.delta1 * yref_k - cfg.delta2 * y_k);

    double u_k = 0.0;
    if (cfg.composition == IStarComposition::multiplicative ||
        cfg.gain.mode == GainMode::pure_gain) {
        u_k = gain_value * core;
    } else {
        cfg.core_accumulator += core * ts;
        u_k = cfg.gain.k_i * cfg.core_accumulator;
    }
    require_finite(u_k, "control output");
    cfg.u_prev = u_k;
    return u_k;
}

} // namespace mfc
