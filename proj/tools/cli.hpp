#pragma once

#include <iosfwd>

namespace su11::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kToleranceBreach = 2,
  kNumericalWarning = 3,
};

/// Entry point of the su11wig tool. Messages go to out/err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace su11::cli
