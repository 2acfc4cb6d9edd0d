#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace binfit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kPartialFailure = 1,
  kUsageError = 2,
  kTotalFailure = 3,
};

// Runs the command line (args excludes the program name), writing console
// output to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace binfit::cli
