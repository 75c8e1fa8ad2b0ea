#pragma once

#include <iosfwd>

namespace qsp::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kInvalidMatrix = 3,
  kVerifyFailed = 4,
  kNotConverged = 5,
  kAssertionFailed = 6,
};

// Full command-line entry point; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsp::cli
