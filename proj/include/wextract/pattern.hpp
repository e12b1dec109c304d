#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "wextract/fragment.hpp"
#include "wextract/rules.hpp"
#include "wextract/timestamp.hpp"
#include "wextract/url.hpp"

namespace wextract {

// Anchored regular expression that re-locates a page's main price without
// re-running the rule pipeline. Exactly one capturing group, the numeric
// value. The dialect is a portable subset: literals, character classes and
// bounded quantifiers.
struct PointingPattern {
  PageUrl url;
  std::string regex_source;
  std::string currency_code;
  Timestamp created_at = 0;
};

struct PatternOptions {
  // {d-1,d} on the integer part instead of {d-1,d+1}.
  bool paper_exact_quantifier = false;
};

// Builds the pattern from the winning fragment: a literal anchor (the
// fragment's open-tag attribute string, escaped, through to the price), the
// currency token as matched, and a numeric matcher that generalizes the
// observed integer part of d digits to [0-9]{max(1,d-1),d+1} with optional
// grouping and an optional 1-2 digit decimal part. Fragments without
// attributes anchor on the 30 characters preceding the price instead.
// Throws std::invalid_argument if the fragment holds no parseable price.
PointingPattern derive_pattern(const Fragment& winner,
                               const CandidatePrice& price, const PageUrl& url,
                               Timestamp now, const PatternOptions& options = {});

// First match wins; the captured group is parsed with the same number
// conventions as parse_price. Structural page changes yield nullopt.
std::optional<CandidatePrice> apply_pattern(std::string_view html,
                                            const PointingPattern& pattern);

std::string escape_regex(std::string_view literal);
int capture_group_count(std::string_view regex_source);
bool pattern_compiles(const std::string& regex_source);

}  // namespace wextract
