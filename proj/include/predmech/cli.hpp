#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace predmech {

/// Exit codes of the command line tool.
enum ExitCode : int
{
  kExitOk = 0,
  kExitInput = 1,
  kExitPrecondition = 2,
  kExitAuditFailure = 3,
  kExitBoundViolation = 4,
};

/// Runs one command. `args` excludes the program name.
int run_cli(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

}  // namespace predmech
