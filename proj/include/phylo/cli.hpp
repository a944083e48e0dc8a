#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phylo {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid_input = 1;
inline constexpr int exit_internal = 2;
inline constexpr int exit_no_convergence = 3;

/// Runs the command line `args` (without the program name). JSON results go
/// to `out`, diagnostics to `err`. A file argument of "-" reads `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace phylo
