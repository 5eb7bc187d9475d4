#pragma once

#include <string>
#include <vector>

namespace dyson::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kToolVersion = "1.0.0";

/// Runs one subcommand. args[0] is the program name.
int run(const std::vector<std::string>& args);

/// Parses lo:hi:n (uniform) or glo:hi:n (geometric) into n points.
std::vector<double> parse_grid(const std::string& text);

}  // namespace dyson::cli
