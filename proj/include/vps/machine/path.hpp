#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "vps/machine/state.hpp"

namespace vps::machine {

enum class PathErrorKind { Malformed, UnknownBinding, UnknownField, NullTraversal, IndexOutOfBounds };

class PathError : public std::runtime_error {
public:
    PathError(PathErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    PathErrorKind kind() const { return kind_; }

private:
    PathErrorKind kind_;
};

/// Follows a path such as "ref_p.rut" or "array_personas[0].edad" from a
/// binding of the innermost frame through the heap. Arrays also expose
/// "length".
Value read_path(const MachineState& state, std::string_view path);

}  // namespace vps::machine
