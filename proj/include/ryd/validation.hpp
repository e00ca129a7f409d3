// Validation suite shared by the CLI `validate` command and the acceptance
// test binary: one named check per reproduction target, each printing a
// [PASS]/[FAIL] line.
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ryd {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every acceptance check in order; prints one line per check to
/// stdout. Returns the individual results.
std::vector<CheckResult> run_validation_suite();

}  // namespace ryd
