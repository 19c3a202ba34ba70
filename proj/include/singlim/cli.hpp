#pragma once

#include <iosfwd>

namespace singlim {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitCheckFailed = 2,
  kExitNoConvergence = 3,
};

/// Entry point of the `singlim` tool; all output goes to the given streams and --out files.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace singlim
