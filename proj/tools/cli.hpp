#pragma once

#include <iosfwd>

namespace memsat::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitSat = 10;
inline constexpr int kExitUnknown = 20;

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace memsat::cli
