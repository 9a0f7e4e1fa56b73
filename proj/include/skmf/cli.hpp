#pragma once

#include <iosfwd>

namespace skmf::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kNumericalFailure = 2,
  kVerificationFailure = 3,
};

/// Entry point of the `skmf` tool. Primary CSV output goes to `out` unless a
/// file is requested; diagnostics and usage text go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skmf::cli
