#pragma once

#include <iosfwd>

namespace dqlstm {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

// Subcommands: enumerate, train, evaluate, plot, summary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version_string();

}  // namespace dqlstm
