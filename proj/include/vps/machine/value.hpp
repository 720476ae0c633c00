#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace vps::machine {

struct NullV {
    friend bool operator==(NullV, NullV) { return true; }
};

struct RefV {
    std::uint32_t id = 0;  // heap id, 1-based
    friend bool operator==(RefV, RefV) = default;
};

/// A runtime value. Strings are values on this machine, not heap nodes.
using Value = std::variant<std::int32_t, double, bool, char16_t, std::string, NullV, RefV>;

bool is_ref(const Value& v);
bool is_null(const Value& v);

/// Structural equality; doubles compare by value with NaN equal to NaN and
/// signed zeros kept apart.
bool value_equal(const Value& a, const Value& b);

/// Literal rendering used by diagrams and VPS-D: 5, 2.5, true, 'c', "234",
/// null, @3.
std::string literal(const Value& v);

/// Short tag used in the trace JSON: int, dbl, bool, char, str, null, ref.
const char* type_tag(const Value& v);

}  // namespace vps::machine
