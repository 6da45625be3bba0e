// SPDX-License-Identifier: Apache-2.0
#ifndef FOLIAGE_LINK_FORMAT_HPP
#define FOLIAGE_LINK_FORMAT_HPP

#include <string>

namespace foliage_link {

/// Shortest decimal text that parses back to the same double.
/// Non-finite values render as "nan", "inf" or "-inf".
std::string format_number(double value);

/// Fixed-point text with the given number of decimals.
std::string format_fixed(double value, int decimals);

/// Parses text produced by format_number. Throws Error(ParseError) on junk.
double parse_number(const std::string& text);

}  // namespace foliage_link

#endif  // FOLIAGE_LINK_FORMAT_HPP
