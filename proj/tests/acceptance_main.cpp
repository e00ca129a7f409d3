// Acceptance suite: runs every reproduction criterion at its stated
// tolerance and prints one pass/fail line per criterion.
#include <cstdlib>
#include <iostream>

#include "ryd/validation.hpp"

int main() {
  const std::vector<ryd::CheckResult> results = ryd::run_validation_suite();
  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) ++failed;
  if (failed != 0) {
    std::cerr << failed << " acceptance criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
