#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptower {

/// Exit codes: 0 success, 1 usage or schema error, 2 mathematical
/// inconsistency (theorem violation, oracle mismatch), 3 resource budget.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitMath = 2, kExitBudget = 3 };

/// Runs one command; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptower
