#pragma once

#include <cstdint>
#include <string>

namespace cvbft::csv {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

std::string format_int(std::int64_t value);

}  // namespace cvbft::csv
