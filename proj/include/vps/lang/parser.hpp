#pragma once

#include <string_view>

#include "vps/lang/ast.hpp"

namespace vps::lang {

/// Parses a MiniJava-VPS compilation unit. Stops at the first syntax error
/// and throws ParseError (or LexError from the tokenizer).
Program parse_program(std::string_view source);

}  // namespace vps::lang
