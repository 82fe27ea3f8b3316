#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magnus::cli {

/// Process exit codes of the magnus tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNumerical = 2,
  kVerificationFailed = 3,
};

/// Runs `magnus <command> [flags]`. Commands: propagate, converge, verify,
/// list-methods. CSV goes to --out (or `out` when absent or "-"),
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// %.17g, the CSV number format (round-trips every double).
std::string format_real(double value);

}  // namespace magnus::cli
