// SPDX-License-Identifier: Apache-2.0
#include "foliage_link/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "foliage_link/error.hpp"

namespace foliage_link {

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return {buf.data(), end};
}

std::string format_fixed(double value, int decimals) {
  std::array<char, 400> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return format_number(value);
  return {buf.data(), end};
}

double parse_number(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");
  return value;
}

}  // namespace foliage_link
