#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wextract/fragment.hpp"

namespace wextract {

inline constexpr std::size_t kNoFragment = std::numeric_limits<std::size_t>::max();

enum class RulePhase { discard, recover };

enum class PredicateKind {
  contains_text,
  matches_regex,
  attr_equals,
  class_contains,
  value_below,
  value_above,
};

struct Predicate {
  PredicateKind kind = PredicateKind::contains_text;
  std::string text_arg;          // contains_text / matches_regex /
                                 // attr_equals ("name=value") / class_contains
  std::int64_t amount_arg = 0;   // value_below / value_above, minor units
};

// Ordered condition-action record. Discard rules add weight, recover rules
// reset it to zero.
struct Rule {
  std::string id;
  RulePhase phase = RulePhase::discard;
  Predicate predicate;
  int order = 0;
};

// Rule file grammar: "id|phase|kind|argument" per line, '#' comments.
std::vector<Rule> parse_rules(std::string_view content,
                              std::string_view origin = "rules");
std::vector<Rule> load_rules(const std::filesystem::path& path);

bool predicate_matches(const Predicate& predicate, const Fragment& fragment);

// Each matching discard rule adds one to the fragment's weight. Fragments are
// never removed. Recover rules only apply to this vector's recover phase.
void apply_discard(std::vector<Fragment>& fragments,
                   const std::vector<Rule>& rules);

// Each matching recover rule resets an already-discarded fragment's weight to
// zero, in rule order.
void apply_recover(std::vector<Fragment>& fragments,
                   const std::vector<Rule>& rules);

// A parseable (amount, currency) from a fragment, in minor units.
struct CandidatePrice {
  std::int64_t amount_minor = 0;
  std::string currency_code;
  std::size_t fragment_index = kNoFragment;

  friend bool operator==(const CandidatePrice&, const CandidatePrice&) = default;
};

// Offsets of the clue and of the adjacent number inside fragment.html,
// for pattern derivation.
struct PriceLocation {
  std::size_t clue_begin = 0, clue_end = 0;
  std::size_t num_begin = 0, num_end = 0;
  std::size_t int_begin = 0, int_end = 0;  // integer part, grouping included
  int int_digits = 0;
  bool number_after_clue = true;
  std::int64_t amount_minor = 0;
};

// The numeric value adjacent to the fragment's clue: first a number following
// the clue, then one preceding it; only whitespace may intervene. Percentages
// are not prices.
std::optional<PriceLocation> locate_price(const Fragment& fragment);
std::optional<CandidatePrice> parse_price(const Fragment& fragment);

// Two-phase pipeline outcome. `price` is set iff exactly one distinct
// (amount, currency) pair survives at weight zero. Repeated markup of one
// identical price counts as unique.
struct Selection {
  std::optional<CandidatePrice> price;
  std::size_t winner_fragment = kNoFragment;
  int candidate_count = 0;  // distinct surviving (amount, currency) pairs
  bool recover_ran = false;
  std::vector<std::size_t> survivors;  // zero-weight parseable fragments
};

Selection select_price(std::vector<Fragment>& fragments,
                       const std::vector<Rule>& rules);

}  // namespace wextract
