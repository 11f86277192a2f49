#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cvqss::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNoCloning = 2,
  kExitRank = 3,
  kExitVerify = 4,
};

/// Entry point shared by the executable and the in-process tests. `args`
/// excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvqss::cli
