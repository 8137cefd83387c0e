#pragma once

namespace fortify::cli {

/// Parses argv, runs one subcommand and returns the process exit code:
/// 0 on success, 2 when an audit or certification finds a violation, 1 on
/// errors.
int run(int argc, char** argv);

}  // namespace fortify::cli
