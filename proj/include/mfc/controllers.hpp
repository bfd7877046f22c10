#pragma once

#include "mfc/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mfc {

/// How running integrals are discretized. Rectangular is the default digital
/// rule; trapezoidal exists for convergence comparisons.
enum class IntegrationRule { rectangular, trapezoidal };

/// Parameters of the ultra-local model y^(n) = F + alpha * u.
struct UltraLocalConfig {
    double alpha = 1.0;
    int order_n = 1;

    void validate() const;
};

/// PI corrector C(eps) = kp*eps + ki * integral(eps).
struct PiGains {
    double kp = 0.0;
    double ki = 0.0;
    double integral_state = 0.0;
    std::optional<double> windup_limit;
    IntegrationRule rule = IntegrationRule::rectangular;
    double prev_eps = 0.0;
};

/// Advances the integral by one sample (clamped to the windup limit when
/// configured) and returns kp*eps_k + ki*integral.
double classic_pi_update(PiGains& gains, double eps_k, double ts);

struct DerivativeEstimate {
    double value = 0.0;
    bool warm_up = false;
};

/// Backward finite difference of order 1 or 2 over the newest samples of
/// `window` (oldest first). Fewer than order_n + 1 samples means warm-up:
/// the estimate is 0 and flagged.
DerivativeEstimate estimate_derivative(std::span<const double> window, int order_n, double ts);

/// F = y^(n) - alpha * u, the lumped unknown dynamics of the ultra-local model.
double estimate_F(double y_deriv_n, double alpha, double u);

/// State of the intelligent PI recursion
///   u_k = u_{k-1} - (1/alpha)(y^(n)_{k-1} - y*^(n)_k) + C(eps)_k.
struct IPiState {
    UltraLocalConfig ultra;
    PiGains corrector;
    double u_prev = 0.0;
    std::vector<double> deriv_window;
    /// Optional first-order smoothing of the derivative estimate, in (0, 1];
    /// 1 = raw estimate. Unset = off.
    std::optional<double> deriv_smoothing;
    double smoothed_deriv = 0.0;

    /// Records y_k, keeping the newest order_n + 1 samples.
    void push_output(double y);
    /// Derivative estimate over the recorded window (smoothed if configured).
    DerivativeEstimate output_derivative(double ts);
};

/// One step of the recursion above. Updates u_prev and the corrector state.
/// Throws ControllerFault on non-finite inputs or a non-finite result.
double ipi_update(IPiState& state, double y_deriv_prev, double yref_deriv_k, double eps_k,
                  double ts);

enum class GainMode { pure_gain, integrator };

/// The gain function G: either a fixed gain or k_i times the running
/// integral of the tracking error.
struct GainFunction {
    GainMode mode = GainMode::integrator;
    double k_gain = 1.0;
    double k_i = 1.0;
    double accumulator = 0.0;
    IntegrationRule rule = IntegrationRule::rectangular;
    double prev_eps = 0.0;
};

/// Integrator mode advances the error integral and returns k_i * integral;
/// pure_gain mode returns k_gain untouched by eps_k.
double gain_eval(GainFunction& gain, double eps_k, double ts);

enum class LambdaKind { constant, exp_decay, piecewise_constant };

/// The time-varying gain Lambda(t): a constant, a decaying exponential
/// value * exp(-t/T), or a piecewise-constant breakpoint list.
struct LambdaProfile {
    LambdaKind kind = LambdaKind::constant;
    double value = 0.0;
    double time_constant = 1.0;
    std::vector<std::pair<double, double>> breakpoints;

    void validate() const;
};

double lambda_eval(const LambdaProfile& profile, double t);

/// How the gain function combines with the bracketed recursion:
/// multiplicative scales the bracket by G(eps); cascade feeds the bracket
/// through the gain function's own integrator instead.
enum class IStarComposition { multiplicative, cascade };

/// State and parameters of the unified recursion
///   u_k = G(eps){ u_{k-1} - Lambda(t)(delta1*y* - delta2*y) }.
struct IStarConfig {
    GainFunction gain;
    LambdaProfile lambda;
    double delta1 = 1.0;
    double delta2 = 1.0;
    IStarComposition composition = IStarComposition::multiplicative;
    double u_prev = 0.0;
    /// Running integral of the bracket term, used only in cascade mode.
    double core_accumulator = 0.0;
    /// Most recent G(eps) value, recorded into traces.
    double last_gain_value = 0.0;

    void validate() const;
};

/// One step of the unified recursion. In cascade mode with a pure gain the
/// cascade degenerates to the multiplicative form (gain times bracket).
/// Throws ControllerFault on non-finite inputs or a non-finite result.
double istar_update(IStarConfig& cfg, double y_k, double yref_k, double t_k, double ts);

} // namespace mfc
