#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "vps/diagram/diagram.hpp"

namespace vps::feedback {

class VpsdError : public std::runtime_error {
public:
    VpsdError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line), message_(message) {}
    int line() const { return line_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    std::string message_;
};

/// Parses a student diagram. Literals are normalised to the machine's
/// spelling (`56.00` becomes `56.0`), so equal values compare equal.
/// Several frame sections may precede the heap section.
diagram::Diagram parse_vpsd(std::string_view text);

std::string emit_vpsd(const diagram::Diagram& d);
inline std::string emit_vpsd(const diagram::CanonicalDiagram& c) { return emit_vpsd(c.diagram); }

/// `5`, `null`, `-> @c1`.
std::string render_slot(const diagram::Slot& s);

/// A node line without its label: `Person { rut = "000", edad = 56 }`.
std::string render_node_body(const diagram::NodeBox& n);

}  // namespace vps::feedback
