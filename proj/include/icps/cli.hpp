#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace icps::cli {

inline constexpr std::string_view kVersion = "0.1.0";

// Parses and executes one command line (without the program name).
// Exit codes: 0 success; 1 contract violation in the inputs; 2 verification
// failure; 3 internal consistency error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace icps::cli
