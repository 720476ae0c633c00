#pragma once

#include <string>
#include <string_view>

// Small text helpers shared by the lexer, the machine and the emitters.
namespace vps::text {

void append_utf8(std::string& out, char32_t code);

/// Number of UTF-16 code units needed to encode the UTF-8 text.
std::size_t utf16_length(std::string_view utf8);

/// First UTF-16 code unit of the UTF-8 text (0 for empty text).
char16_t first_utf16_unit(std::string_view utf8);

/// UTF-8 encoding of one UTF-16 code unit.
std::string utf16_unit_to_utf8(char16_t unit);

/// Java-style quoted literal: "a\"b" for strings, 'x' for chars.
std::string quote_string(std::string_view utf8);
std::string quote_char(char16_t unit);

/// Shortest round-trip rendering of a double, Java flavoured: always carries a
/// decimal point or exponent ("56.0", "1.0E10"), and "NaN" / "Infinity".
std::string format_double(double value);

/// Makes arbitrary bytes safe to quote in an error message.
std::string printable(std::string_view raw);

std::string xml_escape(std::string_view raw);

}  // namespace vps::text
