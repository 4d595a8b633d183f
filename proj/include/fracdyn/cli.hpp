#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracdyn {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitConfigError = 2, kExitNumericFailure = 3 };

/// Runs the command line `args` (without the program name). Data goes to
/// `out` (or the --output file), one-line JSON errors to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracdyn
