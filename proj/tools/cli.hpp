#pragma once

#include <ostream>

namespace mechflow::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoError = 2,
  kParseError = 3,
  kNotCertified = 4,  // certification failed, or solver and oracle disagree
  kFailure = 5,
};

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mechflow::cli
