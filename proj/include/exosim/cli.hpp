#pragma once

#include <ostream>

namespace exosim {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitDomain = 1, kExitUsage = 2 };

/// Parses argv, runs the selected subcommand and writes its outputs.
/// Messages go to `out`; failures print one "exosim: error: ..." line to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace exosim
