// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evcs {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNotConverged = 3,
};

/// Command-line entry point. `args` excludes the program name. Subcommands:
/// schedule, baseline, enumerate, experiment, calibrate. Errors go to `err`
/// as "evcs: error[<kind>]: <message>".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace evcs
