#pragma once

#include "mfc/scenario.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace mfc {

/// Recovery bookkeeping for one switch or delay-change event found in a
/// trace. `recovery_seconds` is the time from the event until |eps| first
/// returns inside the settling band; absent if it never does.
struct SwitchRecovery {
    double event_time = 0.0;
    std::optional<double> recovery_seconds;
};

struct MetricsReport {
    double ise = 0.0;
    double iae = 0.0;
    /// Peak excursion beyond the final reference, percent of it.
    double overshoot_pct = 0.0;
    /// Peak excursion opposite the reference sign, percent of the final
    /// reference. This is where a right-half-plane zero shows up.
    double undershoot_pct = 0.0;
    /// Time from reference onset until the error stays inside the band;
    /// absent when the trace ends outside the band. 0 when never outside.
    std::optional<double> settling_time;
    bool diverged = false;
    double peak_u = 0.0;
    std::vector<SwitchRecovery> post_switch_recovery;
    /// Band half-width in output units: band_pct/100 * |final reference|.
    double band_abs = 0.0;
    double reference_final = 0.0;
};

/// Integrals use the rectangular rule over the eps column. Events are read
/// off the trace itself: any row-to-row change of the active index or the
/// effective delay column counts as one event.
MetricsReport compute_metrics(const SimTrace& trace, double band_pct = 2.0);

nlohmann::json metrics_to_json(const MetricsReport& report);

} // namespace mfc
