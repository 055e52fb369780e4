#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entroframe::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kBoundFailure = 1,      // a proven bound failed, or the probe breached the Deutsch floor
  kUsage = 2,             // bad flags, unreadable input, frames failing validation
  kViolationCandidate = 3 // probe found a confirmed conjecture-violation candidate
};

/// Runs the command line `args` (without the program name). Reports and CSV go
/// to files when -o is given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entroframe::cli
