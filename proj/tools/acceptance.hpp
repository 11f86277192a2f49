#pragma once

#include <string>
#include <vector>

namespace cvqss::cli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  /// Perturbs Z of every plan in criterion 1 before it is checked.
  bool inject_fault = false;
};

/// Runs the eight acceptance criteria in order. Never throws for a failing
/// criterion; an unexpected exception marks that criterion failed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

}  // namespace cvqss::cli
