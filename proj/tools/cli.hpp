// Command-line front end. Kept separate from main() so tests can drive it.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace telet::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,    // bad flags, invalid input, schema violations
  kFailure = 2,  // I/O or numerical failure
  kStalled = 3,  // a run ended in status "stalled"; outputs were written
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace telet::cli
