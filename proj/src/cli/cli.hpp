#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace eventforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one eventforge invocation (argv without the program name).
int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace eventforge::cli
