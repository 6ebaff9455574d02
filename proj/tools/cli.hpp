#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tempered {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;    // bad arguments, unreadable or unusable input
inline constexpr int kExitNumeric = 2;  // degenerate fit, solver or quadrature failure

/// Runs one subcommand. args excludes the program name. Reports go to `out`
/// (unless --output is given), messages to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace tempered
