#include <iostream>

#include "acceptance.hpp"

int main() {
  bool all = true;
  for (const auto& r : cvqss::cli::run_acceptance()) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.name << ": "
              << r.detail << "\n";
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
