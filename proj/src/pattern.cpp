#include "wextract/pattern.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <regex>
#include <stdexcept>
#include <unordered_map>

#include "wextract/html_text.hpp"
#include "wextract/money.hpp"

namespace wextract {

namespace {

// Compiled patterns are cached; stores replay the same regex across calls.
std::shared_ptr<const std::regex> compiled(const std::string& source) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::shared_ptr<const std::regex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(source);
  if (it != cache.end()) return it->second;
  auto re = std::make_shared<const std::regex>(source);
  cache.emplace(source, re);
  return re;
}

bool all_whitespace(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

// Gap between anchor/number/clue parts: literal unless it is pure
// whitespace, which generalizes so reformatting does not break the pattern.
std::string gap_regex(std::string_view raw) {
  if (all_whitespace(raw)) return "\\s*";
  return escape_regex(raw);
}

// Numeric matcher for an integer part observed with `digits` digits: either
// a grouped number (1.104 / 1,234 / 1 104) or plain digits in the widened
// quantifier, then an optional decimal part that may sit behind markup
// (split-price elements such as <span class="cents">,15</span>).
std::string number_regex(int digits, bool paper_exact) {
  int lo = std::max(1, digits - 1);
  int hi = paper_exact ? std::max(lo, digits) : digits + 1;
  std::string quant =
      "{" + std::to_string(lo) + "," + std::to_string(hi) + "}";
  return "((?:[0-9]{1,3}(?:[., ][0-9]{3})+|[0-9]" + quant +
         ")(?:(?:<[^>]{0,200}>){0,3}[.,][0-9]{1,2})?)";
}

}  // namespace

std::string escape_regex(std::string_view literal) {
  static constexpr std::string_view kSpecial = "^$\\.*+?()[]{}|";
  std::string out;
  out.reserve(literal.size());
  for (char c : literal) {
    if (kSpecial.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

int capture_group_count(std::string_view source) {
  int count = 0;
  bool in_class = false;
  for (std::size_t i = 0; i < source.size(); ++i) {
    char c = source[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (in_class) {
      if (c == ']') in_class = false;
      continue;
    }
    if (c == '[') {
      in_class = true;
      continue;
    }
    if (c == '(' && (i + 1 >= source.size() || source[i + 1] != '?')) ++count;
  }
  return count;
}

bool pattern_compiles(const std::string& source) {
  try {
    compiled(source);
    return true;
  } catch (const std::regex_error&) {
    return false;
  }
}

PointingPattern derive_pattern(const Fragment& winner,
                               const CandidatePrice& price, const PageUrl& url,
                               Timestamp now, const PatternOptions& options) {
  auto loc = locate_price(winner);
  if (!loc)
    throw std::invalid_argument("derive_pattern: fragment has no parseable price");

  const std::string& html = winner.html;
  std::size_t pivot = loc->number_after_clue ? loc->clue_begin : loc->num_begin;

  // Anchor: from the start of the open tag's attribute string through to the
  // price. Attribute-less fragments fall back to the 30 bytes before it.
  std::size_t anchor_begin;
  auto tag = parse_open_tag(html);
  if (tag && tag->attrs_end > tag->attrs_begin && tag->attrs_begin <= pivot) {
    anchor_begin = tag->attrs_begin;
  } else {
    anchor_begin = pivot - std::min<std::size_t>(pivot, 30);
  }
  std::string source = escape_regex(
      std::string_view(html).substr(anchor_begin, pivot - anchor_begin));

  std::string_view clue_bytes =
      std::string_view(html).substr(loc->clue_begin, loc->clue_end - loc->clue_begin);
  std::string number = number_regex(loc->int_digits, options.paper_exact_quantifier);

  if (loc->number_after_clue) {
    source += escape_regex(clue_bytes);
    source += gap_regex(
        std::string_view(html).substr(loc->clue_end, loc->num_begin - loc->clue_end));
    source += number;
  } else {
    source += number;
    source += gap_regex(
        std::string_view(html).substr(loc->num_end, loc->clue_begin - loc->num_end));
    source += escape_regex(clue_bytes);
  }

  PointingPattern pattern{url, source, price.currency_code, now};
  if (!pattern_compiles(pattern.regex_source) ||
      capture_group_count(pattern.regex_source) != 1)
    throw std::logic_error("derive_pattern: malformed pattern: " +
                           pattern.regex_source);
  return pattern;
}

std::optional<CandidatePrice> apply_pattern(std::string_view html,
                                            const PointingPattern& pattern) {
  std::shared_ptr<const std::regex> re;
  try {
    re = compiled(pattern.regex_source);
  } catch (const std::regex_error&) {
    return std::nullopt;
  }
  std::cmatch match;
  if (!std::regex_search(html.data(), html.data() + html.size(), match, *re))
    return std::nullopt;
  if (match.size() < 2 || !match[1].matched) return std::nullopt;

  // The group may span markup in split-price layouts; read it as page text.
  std::string captured(match[1].first, match[1].second);
  VisibleText vt = visible_text(captured);
  auto amount = parse_amount(vt.text, 0);
  if (!amount) return std::nullopt;
  return CandidatePrice{amount->minor, pattern.currency_code, kNoFragment};
}

}  // namespace wextract
