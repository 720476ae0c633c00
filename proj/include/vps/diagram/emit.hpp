#pragma once

#include <string>

#include "vps/diagram/diagram.hpp"

namespace vps::diagram {

// All emitters are deterministic functions of the diagram value; pass a
// canonical diagram to get output that is independent of heap numbering.

std::string emit_dot(const Diagram& d);
inline std::string emit_dot(const CanonicalDiagram& c) { return emit_dot(c.diagram); }

std::string emit_svg(const Diagram& d);
inline std::string emit_svg(const CanonicalDiagram& c) { return emit_svg(c.diagram); }

/// JSON view of a diagram, as served to the web UI.
std::string emit_diagram_json(const Diagram& d);

/// Advance width of UTF-8 text in Helvetica at the given size.
double text_width(std::string_view utf8, double fontSize);

}  // namespace vps::diagram
