#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twolevel::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kInputError = 2 };

/// Runs the command line `args` (program name excluded). Positional file
/// arguments are read from disk; "-" or no file reads `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace twolevel::cli
