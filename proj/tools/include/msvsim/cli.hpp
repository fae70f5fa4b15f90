#pragma once

#include <ostream>
#include <span>
#include <string>

namespace msvsim {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Entry point behind the msvsim binary. `args` excludes the program name.
/// Never throws; every failure is reported on `err` and mapped to an exit code.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace msvsim
