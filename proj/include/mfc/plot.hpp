#pragma once

#include "mfc/scenario.hpp"

#include <iosfwd>
#include <string>

namespace mfc {

/// Renders the trace as a self-contained SVG: reference and output in the
/// top panel, control input in the bottom panel, with dashed markers at
/// every switch or delay-change instant.
void write_plot_svg(std::ostream& os, const SimTrace& trace, const std::string& title);

} // namespace mfc
