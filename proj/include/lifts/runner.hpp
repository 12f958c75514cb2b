#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lifts {

inline constexpr int kFormatVersion = 1;

/// Exit codes of the command-line runner.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfigError = 2 };

/**
 * Command-line entry point. `args` excludes the program name and starts with
 * a subcommand: constants, divergence-verify, simulate, scaling, optimality.
 * Returns 0 when every check passes, 1 on failed checks or runtime errors,
 * 2 on malformed flags or config.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Output directory used when --output is not given: $LIFTS_OUTPUT_DIR, else "lifts-output".
std::string default_output_dir();

std::string version_string();

}  // namespace lifts
