#pragma once

// Runtime invariant suites behind `skmf verify`. Each check reports the
// measured error and the bound it was held to.

#include <iosfwd>
#include <string>
#include <vector>

namespace skmf {

struct CheckResult {
  std::string suite;
  std::string name;
  double value{0};      // measured error or violation count
  double tolerance{0};  // passes when value <= tolerance
  bool passed{false};
  std::string note;     // exception text when the check threw
};

/// identities, avm, consistency, meanfield, particles, all
const std::vector<std::string>& verify_suite_names();

/// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_verify_suite(const std::string& suite);

void print_check_table(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace skmf
