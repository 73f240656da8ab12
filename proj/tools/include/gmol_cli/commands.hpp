#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gmol::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNonConvergence = 2 };

/// Runs `gmol <args...>` (program name excluded). Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" into numbers; throws UsageError naming `flag` on bad input.
std::vector<double> parse_number_list(const std::string& text, const std::string& flag);

}  // namespace gmol::cli
