#pragma once

#include <iosfwd>

namespace qlearndyn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericFailure = 3;

/// Entry point of the qlearndyn command-line tool. Subcommands: classify,
/// simulate, agents, restpoints, sweep, critical, portrait.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlearndyn
