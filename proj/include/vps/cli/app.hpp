#pragma once

#include <iosfwd>

namespace vps::cli {

/// The `vps` command line. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vps::cli
