#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcplan {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitContractFailure = 1,
  kExitParseError = 2,
  kExitLiftFailure = 3,
};

/// Runs the command-line front end; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcplan
