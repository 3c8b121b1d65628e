#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace thermoshift::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsageError = 2 };

/// Runs one command line (argv[0] is the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thermoshift::cli
