#pragma once

#include <string>

#include "vps/lang/ast.hpp"

namespace vps::lang {

/// Renders the program as canonical MiniJava-VPS source (4-space indent,
/// minimal parentheses). Re-parsing the output gives a structurally equal AST.
std::string pretty_print(const Program& program);
std::string pretty_print(const Expr& expr);

}  // namespace vps::lang
