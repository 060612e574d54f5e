#pragma once

#include <iosfwd>

namespace conic_lab::cli {

// Parses argv (argv[0] is the program name), runs one subcommand and returns
// the process exit code: 0 success, 2 invalid input or budget refusal,
// 1 internal failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conic_lab::cli
