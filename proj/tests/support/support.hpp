#pragma once

#include <string>

#include "vps/lang/ast.hpp"
#include "vps/machine/interpreter.hpp"

namespace vps::test {

/// Contents of samples/<name>.
std::string read_sample(const std::string& name);

lang::CheckedProgram compile_sample(const std::string& name);

machine::Trace run_sample(const std::string& name, std::size_t maxSteps = machine::kDefaultMaxSteps);

/// Compiles and runs inline source.
machine::Trace run_source(const std::string& source, std::size_t maxSteps = machine::kDefaultMaxSteps);

/// `class Main { public static void main(String[] args) { BODY } }`
std::string main_only(const std::string& body);

/// Path of a file under the samples directory.
std::string sample_path(const std::string& name);

/// The bundled example programs (file names under samples/).
const std::vector<std::string>& sample_programs();

}  // namespace vps::test
