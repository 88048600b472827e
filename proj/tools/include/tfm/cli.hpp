#pragma once

#include "transfinite/snapshot.hpp"

#include <iosfwd>

namespace tfm {

inline constexpr int kExitUsage = 1;

/// 0 halted, 2 looping, 3 unresolved, 4 crashed or continuity violation.
int exit_code(transfinite::Outcome o);

/// The whole command line: subcommands run, compile, bisim, survey, torus,
/// replay.  Never throws; errors go to `err` with exit code 1.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tfm
