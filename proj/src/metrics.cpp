#include "mfc/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mfc {

MetricsReport compute_metrics(const SimTrace& trace, double band_pct) {
    if (trace.rows.empty()) {
        throw ConfigError("compute_metrics requires a non-empty trace");
    }
    if (!(band_pct > 0.0)) {
        throw ConfigError("compute_metrics requires band_pct > 0");
    }
    const auto& rows = trace.rows;

    MetricsReport report;
    report.diverged = trace.diverged;
    report.reference_final = rows.back().y_ref;
    report.band_abs = band_pct / 100.0 * std::abs(report.reference_final);

    // Left-rectangular integrals: each sample holds until the next one.
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double dt = rows[i + 1].t - rows[i].t;
        report.ise += rows[i].eps * rows[i].eps * dt;
        report.iae += std::abs(rows[i].eps) * dt;
    }

    for (const auto& row : rows) {
        report.peak_u = std::max(report.peak_u, std::abs(row.u));
    }

    const double ref = report.reference_final;
    if (ref != 0.0) {
        double max_y = rows.front().y;
        double min_y = rows.front().y;
        for (const auto& row : rows) {
            max_y = std::max(max_y, row.y);
            min_y = std::min(min_y, row.y);
        }
        if (ref > 0.0) {
            report.overshoot_pct = std::max(0.0, (max_y - ref) / ref * 100.0);
            report.undershoot_pct = std::max(0.0, -min_y / ref * 100.0);
        } else {
            report.overshoot_pct = std::max(0.0, (ref - min_y) / -ref * 100.0);
            report.undershoot_pct = std::max(0.0, max_y / -ref * 100.0);
        }
    }

    // Onset: the first sample with a nonzero reference.
    double onset_t = rows.front().t;
    for (const auto& row : rows) {
        if (row.y_ref != 0.0) {
            onset_t = row.t;
            break;
        }
    }

    std::ptrdiff_t last_violation = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::abs(rows[i].eps) > report.band_abs) {
            last_violation = static_cast<std::ptrdiff_t>(i);
        }
    }
    if (last_violation < 0) {
        report.settling_time = 0.0;
    } else if (last_violation + 1 < static_cast<std::ptrdiff_t>(rows.size())) {
        report.settling_time = rows[static_cast<std::size_t>(last_violation) + 1].t - onset_t;
    }
    // else: still outside the band at the end; settling_time stays absent.

    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].p == rows[i - 1].p && rows[i].tau == rows[i - 1].tau) {
            continue;
        }
        SwitchRecovery rec;
        rec.event_time = rows[i].t;
        for (std::size_t j = i; j < rows.size(); ++j) {
            if (std::abs(rows[j].eps) <= report.band_abs) {
                rec.recovery_seconds = rows[j].t - rows[i].t;
                break;
            }
        }
        report.post_switch_recovery.push_back(rec);
    }

    return report;
}

nlohmann::json metrics_to_json(const MetricsReport& report) {
    nlohmann::json out;
    out["ise"] = report.ise;
    out["iae"] = report.iae;
    out["overshoot_pct"] = report.overshoot_pct;
    out["undershoot_pct"] = report.undershoot_pct;
    out["settling_time"] =
        report.settling_time ? nlohmann::json(*report.settling_time) : nlohmann::json();
    out["diverged"] = report.diverged;
    out["peak_u"] = report.peak_u;
    out["band_abs"] = report.band_abs;
    out["reference_final"] = report.reference_final;
    nlohmann::json recoveries = nlohmann::json::array();
    for (const auto& rec : report.post_switch_recovery) {
        nlohmann::json entry;
        entry["event_time"] = rec.event_time;
        entry["recovery_seconds"] =
            rec.recovery_seconds ? nlohmann::json(*rec.recovery_seconds) : nlohmann::json();
        recoveries.push_back(std::move(entry));
    }
    out["post_switch_recovery"] = std::move(recoveries);
    return out;
}

} // namespace mfc
