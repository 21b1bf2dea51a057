#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace euclidlab::cli {

enum ExitCode : int {
  kOk = 0,
  kViolation = 2,
  kBudgetExceeded = 3,
  kConfigError = 64,
};

/// Runs one subcommand. `args` excludes the program name. The report goes to
/// `out` (or the --output file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace euclidlab::cli
