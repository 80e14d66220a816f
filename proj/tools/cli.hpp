#pragma once

#include <iosfwd>

namespace mfgrid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssumption = 1;  // A1-A4 failed or shooting degenerate
inline constexpr int kExitConfig = 2;      // bad flags, unreadable or invalid config
inline constexpr int kExitRuntime = 3;     // I/O or numerical failure

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfgrid::cli
