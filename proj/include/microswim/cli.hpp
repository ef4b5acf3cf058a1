#pragma once

#include <ostream>

namespace microswim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // numerical failure or a failed check
inline constexpr int kExitUsage = 2;    // bad arguments or config

/// Entry point of the `microswim` tool. Reports go to `out`, diagnostics and logs to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace microswim
