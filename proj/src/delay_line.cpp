#include "mfc/delay_line.hpp"

#include <algorithm>
#include <cmath>

namespace mfc {

DelayLine::DelayLine(double capacity_horizon, Vector pre_history_value)
    : capacity_horizon_(capacity_horizon), pre_history_(std::move(pre_history_value)) {
    if (capacity_horizon < 0.0) {
        throw ConfigError("DelayLine capacity horizon must be >= 0");
    }
}

void DelayLine::append(double t, Vector value) {
    if (!samples_.empty() && t <= samples_.back().time) {
        throw ConfigError("DelayLine samples must have strictly increasing timestamps");
    }
    samples_.push_back({t, std::move(value)});
    // Drop the oldest sample only while the span excluding it still covers
    // the full capacity horizon; reads at exactly t - capacity stay bracketed.
    while (samples_.size() >= 2 && t - samples_[1].time >= capacity_horizon_) {
        samples_.pop_front();
    }
}

double DelayLine::newest_time() const {
    if (samples_.empty()) throw ConfigError("DelayLine is empty");
    return samples_.back().time;
}

double DelayLine::oldest_time() const {
    if (samples_.empty()) throw ConfigError("DelayLine is empty");
    return samples_.front().time;
}

Vector DelayLine::read_delayed(double t, double tau) const {
    if (tau < 0.0) {
        throw ConfigError("DelayLine read requires tau >= 0");
    }
    if (tau > capacity_horizon_) {
        throw ConfigError("DelayLine read beyond capacity horizon");
    }
    const double tr = t - tau;
    if (samples_.empty() || tr < samples_.front().time) {
        return pre_history_;
    }
    if (tr >= samples_.back().time) {
        return samples_.back().value;
    }
    const auto it = std::lower_bound(
        samples_.begin(), samples_.end(), tr,
        [](const Sample& s, double time) { return s.time < time; });
    if (it->time == tr) {
        return it->value;
    }
    const Sample& hi = *it;
    const Sample& lo = *std::prev(it);
    if (lo.value.size() != hi.value.size()) {
        // Bracketing pair straddles a regime change that altered the state
        // dimension; interpolation is meaningless, take the nearer sample.
        return (tr - lo.time <= hi.time - tr) ? lo.value : hi.value;
    }
    const double theta = (tr - lo.time) / (hi.time - lo.time);
    return lo.value + theta * (hi.value - lo.value);
}

} // namespace mfc
