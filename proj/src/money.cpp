#include "wextract/money.hpp"

#include <cctype>
#include <vector>

namespace wextract {

namespace {

constexpr std::int64_t kMaxIntegerPart = 9'999'999'999'999;  // 13 digits

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_group_sep(char c) { return c == '.' || c == ',' || c == ' '; }

struct Run {
  std::size_t begin;
  std::size_t len;
  char sep_before;  // separator preceding this run, 0 for the first
};

}  // namespace

std::optional<ParsedAmount> parse_amount(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || !is_digit(text[pos])) return std::nullopt;

  // Tokenize: digit runs joined by single separators.
  std::vector<Run> runs;
  std::size_t i = pos;
  char sep = 0;
  while (i < text.size() && is_digit(text[i])) {
    Run run{i, 0, sep};
    while (i < text.size() && is_digit(text[i])) {
      ++run.len;
      ++i;
    }
    runs.push_back(run);
    if (i < text.size() && is_group_sep(text[i]) && i + 1 < text.size() &&
        is_digit(text[i + 1])) {
      sep = text[i];
      ++i;
    } else {
      break;
    }
  }

  // Longest prefix of runs that reads as [grouped] integer [+ 1-2 decimals].
  for (std::size_t take = runs.size(); take >= 1; --take) {
    const Run& last = runs[take - 1];
    bool has_decimal = take >= 2 && last.len <= 2;
    std::size_t int_runs = has_decimal ? take - 1 : take;

    if (!has_decimal && take >= 2 && last.len != 3) continue;  // bad tail
    // Grouped integers: first run 1-3 digits, the rest exactly 3, one
    // consistent separator.
    bool ok = true;
    if (int_runs >= 2) {
      if (runs[0].len > 3) ok = false;
      char group_sep = runs[1].sep_before;
      for (std::size_t r = 1; r < int_runs && ok; ++r)
        ok = runs[r].len == 3 && runs[r].sep_before == group_sep;
      if (ok && has_decimal && last.sep_before == group_sep &&
          group_sep == ' ')
        ok = false;  // "1 104 15" reads as grouping, not decimals
    }
    if (!ok) continue;

    std::int64_t int_part = 0;
    int int_digits = 0;
    for (std::size_t r = 0; r < int_runs; ++r) {
      for (std::size_t k = 0; k < runs[r].len; ++k) {
        if (int_part > kMaxIntegerPart / 10) return std::nullopt;
        int_part = int_part * 10 + (text[runs[r].begin + k] - '0');
      }
      int_digits += static_cast<int>(runs[r].len);
    }
    std::int64_t cents = 0;
    if (has_decimal) {
      cents = text[last.begin] - '0';
      cents = last.len == 2 ? cents * 10 + (text[last.begin + 1] - '0')
                            : cents * 10;
    }

    ParsedAmount out;
    out.minor = int_part * 100 + cents;
    out.begin = pos;
    out.int_end = runs[int_runs - 1].begin + runs[int_runs - 1].len;
    out.end = last.begin + last.len;
    out.int_digits = int_digits;
    if (out.end < text.size() && text[out.end] == '%') return std::nullopt;
    return out;
  }
  return std::nullopt;
}

std::string format_minor(std::int64_t minor) {
  bool neg = minor < 0;
  if (neg) minor = -minor;
  std::string whole = std::to_string(minor / 100);
  std::int64_t cents = minor % 100;
  std::string out = (neg ? "-" : "") + whole + ".";
  out += static_cast<char>('0' + cents / 10);
  out += static_cast<char>('0' + cents % 10);
  return out;
}

std::optional<std::int64_t> decimal_to_minor(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = s[0] == '-';
  if (neg) ++i;
  if (i >= s.size() || !is_digit(s[i])) return std::nullopt;
  std::int64_t int_part = 0;
  while (i < s.size() && is_digit(s[i])) {
    if (int_part > kMaxIntegerPart / 10) return std::nullopt;
    int_part = int_part * 10 + (s[i] - '0');
    ++i;
  }
  std::int64_t cents = 0;
  if (i < s.size()) {
    if (s[i] != '.') return std::nullopt;
    ++i;
    std::size_t dec_start = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    std::size_t n_dec = i - dec_start;
    if (i != s.size() || n_dec < 1 || n_dec > 2) return std::nullopt;
    cents = s[dec_start] - '0';
    cents = n_dec == 2 ? cents * 10 + (s[dec_start + 1] - '0') : cents * 10;
  }
  std::int64_t minor = int_part * 100 + cents;
  return neg ? -minor : minor;
}

}  // namespace wextract
