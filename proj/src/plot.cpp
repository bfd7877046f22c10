#include "mfc/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

namespace mfc {
namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
            return;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

class Panel {
public:
    Panel(double x, double y, double w, double h, double t0, double t1, Range range)
        : x_(x), y_(y), w_(w), h_(h), t0_(t0), t1_(t1), range_(range) {}

    double px(double t) const { return x_ + (t - t0_) / (t1_ - t0_) * w_; }
    double py(double v) const {
        return y_ + h_ - (v - range_.lo) / (range_.hi - range_.lo) * h_;
    }

    void frame(std::ostream& os, const std::string& ylabel) const {
        os << "<rect x='" << x_ << "' y='" << y_ << "' width='" << w_ << "' height='" << h_
           << "' fill='none' stroke='#888' stroke-width='1'/>\n";
        os << "<text x='" << x_ - 8 << "' y='" << y_ + 12
           << "' text-anchor='end' font-size='12' fill='#444'>" << fmt(range_.hi)
           << "</text>\n";
        os << "<text x='" << x_ - 8 << "' y='" << y_ + h_
           << "' text-anchor='end' font-size='12' fill='#444'>" << fmt(range_.lo)
           << "</text>\n";
        os << "<text x='" << x_ - 46 << "' y='" << y_ + h_ / 2
           << "' text-anchor='middle' font-size='13' fill='#222' transform='rotate(-90 "
           << x_ - 46 << " " << y_ + h_ / 2 << ")'>" << ylabel << "</text>\n";
        if (range_.lo < 0.0 && range_.hi > 0.0) {
            os << "<line x1='" << x_ << "' y1='" << py(0.0) << "' x2='" << x_ + w_ << "' y2='"
               << py(0.0) << "' stroke='#ccc' stroke-width='1'/>\n";
        }
    }

    template <typename Getter>
    void polyline(std::ostream& os, const std::vector<TraceRow>& rows, Getter get,
                  const char* color) const {
        os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        // Cap the emitted point count; the curves stay visually identical.
        const std::size_t stride = std::max<std::size_t>(1, rows.size() / 2000);
        for (std::size_t i = 0; i < rows.size(); i += stride) {
            os << px(rows[i].t) << ',' << py(get(rows[i])) << ' ';
        }
        if ((rows.size() - 1) % stride != 0) {
            os << px(rows.back().t) << ',' << py(get(rows.back()));
        }
        os << "'/>\n";
    }

    void event_marker(std::ostream& os, double t) const {
        os << "<line x1='" << px(t) << "' y1='" << y_ << "' x2='" << px(t) << "' y2='"
           << y_ + h_ << "' stroke='#c44' stroke-width='1' stroke-dasharray='4,3'/>\n";
    }

    double x_, y_, w_, h_, t0_, t1_;
    Range range_;
};

} // namespace

void write_plot_svg(std::ostream& os, const SimTrace& trace, const std::string& title) {
    const auto& rows = trace.rows;
    const double width = 900.0;
    const double height = 620.0;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
       << "' viewBox='0 0 " << width << ' ' << height << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << width / 2
       << "' y='24' text-anchor='middle' font-size='16' fill='#111'>" << title
       << (trace.diverged ? " (diverged)" : "") << "</text>\n";
    if (rows.empty()) {
        os << "<text x='" << width / 2 << "' y='" << height / 2
           << "' text-anchor='middle' font-size='14' fill='#666'>empty trace</text>\n";
        os << "</svg>\n";
        return;
    }

    const double t0 = rows.front().t;
    const double t1 = rows.back().t > t0 ? rows.back().t : t0 + 1.0;
    Range y_range;
    Range u_range;
    for (const auto& row : rows) {
        y_range.include(row.y);
        y_range.include(row.y_ref);
        u_range.include(row.u);
    }
    y_range.pad();
    u_range.pad();

    std::vector<double> events;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].p != rows[i - 1].p || rows[i].tau != rows[i - 1].tau) {
            events.push_back(rows[i].t);
        }
    }

    Panel top(70, 50, width - 100, 250, t0, t1, y_range);
    Panel bottom(70, 340, width - 100, 220, t0, t1, u_range);

    top.frame(os, "output");
    top.polyline(os, rows, [](const TraceRow& r) { return r.y_ref; }, "#999");
    top.polyline(os, rows, [](const TraceRow& r) { return r.y; }, "#1565c0");
    bottom.frame(os, "input");
    bottom.polyline(os, rows, [](const TraceRow& r) { return r.u; }, "#2e7d32");
    for (const double t : events) {
        top.event_marker(os, t);
        bottom.event_marker(os, t);
    }

    os << "<text x='70' y='585' font-size='12' fill='#444'>t = " << fmt(t0) << " s</text>\n";
    os << "<text x='" << width - 30 << "' y='585' text-anchor='end' font-size='12' fill='#444'>"
       << fmt(t1) << " s</text>\n";
    os << "<text x='" << width - 30
       << "' y='40' text-anchor='end' font-size='12' fill='#1565c0'>y</text>\n";
    os << "<text x='" << width - 50
       << "' y='40' text-anchor='end' font-size='12' fill='#999'>y*</text>\n";
    os << "<text x='" << width - 30
       << "' y='330' text-anchor='end' font-size='12' fill='#2e7d32'>u</text>\n";
    os << "</svg>\n";
}

} // namespace mfc
