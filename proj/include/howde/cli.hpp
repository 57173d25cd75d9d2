#pragma once

#include <iosfwd>

namespace howde {

// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // invalid data or configuration
inline constexpr int kExitUsage = 2;    // bad or conflicting command-line arguments

// Entry point of the `howde` tool. Results written to "-" go to `out`,
// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace howde
