#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aerolex::cli {

enum ExitCode : int {
  kSuccess = 0,
  kDenied = 1,
  kInputError = 2,
  kInfeasible = 3,
};

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aerolex::cli
