#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace surfstate {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,       // usage errors and failures
  kExitNoSolution = 2,  // a legitimate "no such state / root" verdict
};

/// Entry point of the `surfstate` tool. args[0] is the program name.
/// The default output directory is $SURFSTATE_OUT_DIR, else ./surfstate_out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace surfstate
