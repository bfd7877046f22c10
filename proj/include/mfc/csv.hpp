#pragma once

#include "mfc/scenario.hpp"

#include <iosfwd>
#include <string>

namespace mfc {

/// Writes the trace in the fixed column order
///   t,y_ref,y,u,eps,p,tau,gain_value
/// one row per sample, '\n' separators, '.' decimal point. Numbers use the
/// shortest round-trip form, so identical traces serialize byte-identically
/// regardless of locale or stream state.
void write_trace_csv(std::ostream& os, const SimTrace& trace);

std::string trace_csv_string(const SimTrace& trace);

extern const char* const kTraceCsvHeader;

} // namespace mfc
