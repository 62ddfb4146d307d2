#pragma once

#include <iosfwd>

namespace polyapprox {

inline constexpr const char* kToolVersion = "0.1.0";

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 2 configuration or input error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyapprox
