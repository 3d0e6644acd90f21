#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sphere {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
};

/// Parses `args` (without the program name) and runs one subcommand.
/// Data goes to files under --out, or to `out` with `--out -`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sphere
