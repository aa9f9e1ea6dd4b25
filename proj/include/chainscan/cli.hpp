#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chainscan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitStrict = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutEnv = "CHAINSCAN_OUT";

/// Runs one subcommand. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace chainscan::cli
