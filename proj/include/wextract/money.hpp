#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wextract {

// A numeric price token parsed out of page text, held in minor units (cents).
struct ParsedAmount {
  std::int64_t minor = 0;
  std::size_t begin = 0;    // token start
  std::size_t end = 0;      // one past token end
  std::size_t int_end = 0;  // one past the integer part (grouping included)
  int int_digits = 0;       // digit count of the integer part
};

// Parses a price token starting at `pos`; text[pos] must be a digit.
// Understands both decimal conventions (1,234.56 and 1.234,56), space
// grouping (1 104,15) and plain integers. Grouping runs are exactly three
// digits, decimal runs one or two; anything longer trims the token back to
// its longest valid prefix. A token immediately followed by '%' is rejected.
std::optional<ParsedAmount> parse_amount(std::string_view text, std::size_t pos);

// 12500 -> "125.00". Always two decimals.
std::string format_minor(std::int64_t minor);

// "125" / "125.5" / "125.00" -> minor units. No grouping, at most 2 decimals.
std::optional<std::int64_t> decimal_to_minor(std::string_view s);

}  // namespace wextract
