#pragma once

#include <ostream>

namespace pbdstein::cli {

// Exit codes: 0 success, 2 flag or parameter validation failure, 3 a named
// mathematical applicability condition fails, 4 internal consistency failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInapplicable = 3;
inline constexpr int kExitInconsistent = 4;

// Full command driver; writes the report to `out` (or the --output file) and
// diagnostics to `err`. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pbdstein::cli
