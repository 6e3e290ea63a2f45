// Command-line front end. Exit codes: 0 success, 1 internal consistency
// failure, 2 invalid input (the message names the flag or field), 3 I/O.
#pragma once

#include <iosfwd>

namespace delocal {

inline constexpr const char* kVersion = "delocal 0.1.0";
inline constexpr const char* kSeedEnv = "DELOCAL_SEED";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace delocal
