#include "mfc/csv.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace mfc {

const char* const kTraceCsvHeader = "t,y_ref,y,u,eps,p,tau,gain_value";

namespace {

void append_number(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

} // namespace

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
    std::string line;
    line.reserve(128);
    os << kTraceCsvHeader << '\n';
    for (const auto& row : trace.rows) {
        line.clear();
        append_number(line, row.t);
        line.push_back(',');
        append_number(line, row.y_ref);
        line.push_back(',');
        append_number(line, row.y);
        line.push_back(',');
        append_number(line, row.u);
        line.push_back(',');
        append_number(line, row.eps);
        line.push_back(',');
        line.append(std::to_string(row.p));
        line.push_back(',');
        append_number(line, row.tau);
        line.push_back(',');
        append_number(line, row.gain_value);
        line.push_back('\n');
        os << line;
    }
}

std::string trace_csv_string(const SimTrace& trace) {
    std::ostringstream oss;
    write_trace_csv(oss, trace);
    return oss.str();
}

} // namespace mfc
