#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace episis::cli {

inline constexpr const char* version = "episis 1.0.0";

enum ExitCode : int {
    success = 0,
    usage_error = 1,
    numeric_failure = 2,
    capacity_exceeded = 3,
};

/// Entry point of the `episis` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace episis::cli
