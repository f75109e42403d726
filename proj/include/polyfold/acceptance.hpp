#pragma once

#include <string>
#include <vector>

namespace polyfold::acceptance {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the acceptance criteria. `fixtures_dir` holds the shipped fixture
// files; `filter` is a substring filter over row names (empty = all).
std::vector<CriterionResult> run(const std::string& fixtures_dir, unsigned seed,
                                 const std::string& filter);

// Prints one pass/fail line per criterion; returns the process exit code
// (0 on all-pass, 1 otherwise).
int report(const std::vector<CriterionResult>& results);

}  // namespace polyfold::acceptance
