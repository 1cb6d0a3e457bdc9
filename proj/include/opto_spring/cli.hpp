#pragma once

#include <ostream>

namespace opto_spring {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitRuntime = 3 };

/// Entry point of the `opto-spring` tool, kept in the library for testing.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opto_spring
