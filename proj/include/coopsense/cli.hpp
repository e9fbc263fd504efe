// Command-line front end: optimize | evaluate | simulate | sweep | validate.
#pragma once

#include <iosfwd>

namespace coopsense {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // I/O problems and failed validation verdicts
  kExitUsage = 2,
  kExitNumerical = 3,
};

/// Runs the CLI with the given arguments (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coopsense
