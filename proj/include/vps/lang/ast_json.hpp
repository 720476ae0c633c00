#pragma once

#include <string>

#include "vps/lang/ast.hpp"

namespace vps::lang {

/// JSON rendering of a checked program, with the static type of every
/// expression. Used by `vps parse`.
std::string ast_to_json(const CheckedProgram& program);

}  // namespace vps::lang
