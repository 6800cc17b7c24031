#pragma once

#include <string>
#include <vector>

namespace camo::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kInternal = 3 };

// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args);

}  // namespace camo::cli
