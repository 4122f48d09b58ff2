#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace persuade::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2 };

/// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace persuade::cli
