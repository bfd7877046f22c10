#pragma once

#include "mfc/types.hpp"

#include <cstddef>
#include <deque>

namespace mfc {

/// Time-indexed history buffer with linearly interpolated delayed reads.
///
/// Samples are appended with strictly increasing timestamps. A read at
/// (t, tau) returns the value the recorded signal had at t - tau:
///   - before the first sample it returns the pre-history value,
///   - at a stored timestamp it returns that sample bitwise (no arithmetic),
///   - between samples it interpolates linearly,
///   - past the newest sample it clamps to the newest value.
///
/// Old samples are pruned, but never so far that the retained span drops
/// below the capacity horizon, so any delay up to the horizon stays
/// resolvable. Reads with tau > capacity_horizon() are refused.
class DelayLine {
public:
    DelayLine() = default;
    DelayLine(double capacity_horizon, Vector pre_history_value);

    /// Appends a sample. Its time must exceed the newest stored time.
    void append(double t, Vector value);

    /// Value of the recorded signal at t - tau. Requires 0 <= tau <= capacity.
    Vector read_delayed(double t, double tau) const;

    double capacity_horizon() const { return capacity_horizon_; }
    const Vector& pre_history_value() const { return pre_history_; }
    void set_pre_history_value(Vector v) { pre_history_ = std::move(v); }

    bool empty() const { return samples_.empty(); }
    std::size_t size() const { return samples_.size(); }
    double newest_time() const;
    double oldest_time() const;

private:
    struct Sample {
        double time;
        Vector value;
    };

    std::deque<Sample> samples_;
    double capacity_horizon_ = 0.0;
    Vector pre_history_;
};

} // namespace mfc
