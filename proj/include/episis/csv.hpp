#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace episis::csv {

/// Shortest string that parses back to exactly `v`; NaN prints as an empty cell.
inline std::string num(double v)
{
    if (std::isnan(v))
        return {};
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace episis::csv
