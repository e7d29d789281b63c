#include "cvbft/csv.hpp"

#include <array>
#include <charconv>

namespace cvbft::csv {

std::string format_double(double value) {
    std::array<char, 64> buffer{};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return {buffer.data(), end};
}

std::string format_int(std::int64_t value) { return std::to_string(value); }

}  // namespace cvbft::csv
