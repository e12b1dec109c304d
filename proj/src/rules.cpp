#include "wextract/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "wextract/html_text.hpp"
#include "wextract/money.hpp"

namespace wextract {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<PredicateKind> kind_from(const std::string& s) {
  if (s == "contains_text") return PredicateKind::contains_text;
  if (s == "matches_regex") return PredicateKind::matches_regex;
  if (s == "attr_equals") return PredicateKind::attr_equals;
  if (s == "class_contains") return PredicateKind::class_contains;
  if (s == "value_below") return PredicateKind::value_below;
  if (s == "value_above") return PredicateKind::value_above;
  return std::nullopt;
}

std::string root_attrs(const Fragment& fragment) {
  auto tag = parse_open_tag(fragment.html);
  if (!tag) return "";
  return std::string(
      fragment.html.substr(tag->attrs_begin, tag->attrs_end - tag->attrs_begin));
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

std::vector<Rule> parse_rules(std::string_view content, std::string_view origin) {
  std::vector<Rule> rules;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  int order = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    ++line_no;
    std::string line = trim(content.substr(pos, eol - pos));
    std::size_t at_end = eol == content.size() ? 1 : 0;
    pos = eol + 1;
    if (line.empty() || line[0] == '#') {
      if (at_end) break;
      continue;
    }
    auto fail = [&](const std::string& what) -> std::runtime_error {
      return std::runtime_error(std::string(origin) + ":" +
                                std::to_string(line_no) + ": " + what);
    };
    std::size_t p1 = line.find('|');
    std::size_t p2 = p1 == std::string::npos ? std::string::npos
                                             : line.find('|', p1 + 1);
    std::size_t p3 = p2 == std::string::npos ? std::string::npos
                                             : line.find('|', p2 + 1);
    if (p3 == std::string::npos)
      throw fail("expected 'id|phase|kind|argument'");
    Rule rule;
    rule.id = trim(line.substr(0, p1));
    std::string phase = trim(line.substr(p1 + 1, p2 - p1 - 1));
    std::string kind = trim(line.substr(p2 + 1, p3 - p2 - 1));
    std::string arg = trim(line.substr(p3 + 1));
    if (rule.id.empty()) throw fail("empty rule id");
    if (!seen_ids.insert(rule.id).second)
      throw fail("rule '" + rule.id + "': duplicate id");
    if (phase == "discard")
      rule.phase = RulePhase::discard;
    else if (phase == "recover")
      rule.phase = RulePhase::recover;
    else
      throw fail("rule '" + rule.id + "': unknown phase '" + phase + "'");
    auto k = kind_from(kind);
    if (!k) throw fail("rule '" + rule.id + "': unknown predicate kind '" +
                       kind + "'");
    rule.predicate.kind = *k;
    if (*k == PredicateKind::value_below || *k == PredicateKind::value_above) {
      auto minor = decimal_to_minor(arg);
      if (!minor)
        throw fail("rule '" + rule.id + "': bad amount '" + arg + "'");
      rule.predicate.amount_arg = *minor;
    } else {
      if (arg.empty())
        throw fail("rule '" + rule.id + "': empty argument");
      if (*k == PredicateKind::matches_regex) {
        try {
          std::regex probe(arg);
        } catch (const std::regex_error& e) {
          throw fail("rule '" + rule.id + "': bad regex: " + e.what());
        }
      }
      rule.predicate.text_arg = arg;
    }
    rule.order = order++;
    rules.push_back(std::move(rule));
    if (at_end) break;
  }
  return rules;
}

std::vector<Rule> load_rules(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open rule file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str(), path.filename().string());
}

bool predicate_matches(const Predicate& predicate, const Fragment& fragment) {
  switch (predicate.kind) {
    case PredicateKind::contains_text: {
      VisibleText vt = visible_text(fragment.html);
      return vt.text.find(predicate.text_arg) != std::string::npos;
    }
    case PredicateKind::matches_regex: {
      std::regex re(predicate.text_arg);
      return std::regex_search(fragment.html, re);
    }
    case PredicateKind::attr_equals: {
      auto eq = predicate.text_arg.find('=');
      std::string name = predicate.text_arg.substr(0, eq);
      std::string want =
          eq == std::string::npos ? "" : predicate.text_arg.substr(eq + 1);
      auto value = attr_value(root_attrs(fragment), name);
      return value && *value == want;
    }
    case PredicateKind::class_contains: {
      auto value = attr_value(root_attrs(fragment), "class");
      return value && value->find(predicate.text_arg) != std::string::npos;
    }
    case PredicateKind::value_below: {
      auto price = parse_price(fragment);
      return price && price->amount_minor < predicate.amount_arg;
    }
    case PredicateKind::value_above: {
      auto price = parse_price(fragment);
      return price && price->amount_minor > predicate.amount_arg;
    }
  }
  return false;
}

void apply_discard(std::vector<Fragment>& fragments,
                   const std::vector<Rule>& rules) {
  for (const Rule& rule : rules) {
    if (rule.phase != RulePhase::discard) continue;
    for (Fragment& fragment : fragments)
      if (predicate_matches(rule.predicate, fragment)) ++fragment.weight;
  }
}

void apply_recover(std::vector<Fragment>& fragments,
                   const std::vector<Rule>& rules) {
  for (const Rule& rule : rules) {
    if (rule.phase != RulePhase::recover) continue;
    for (Fragment& fragment : fragments)
      if (fragment.weight >= 1 && predicate_matches(rule.predicate, fragment))
        fragment.weight = 0;
  }
}

std::optional<PriceLocation> locate_price(const Fragment& fragment) {
  VisibleText vt = visible_text(fragment.html);
  std::string canonical = fragment.clue.text;
  if (auto decoded = decode_single_entity(canonical)) canonical = *decoded;
  if (canonical.empty()) return std::nullopt;

  std::size_t occ = 0;
  while ((occ = vt.text.find(canonical, occ)) != std::string::npos) {
    std::size_t occ_end = occ + canonical.size();

    auto build = [&](const ParsedAmount& amount, bool after) {
      PriceLocation loc;
      loc.clue_begin = vt.raw_begin(occ);
      loc.clue_end = vt.raw_end(occ_end - 1);
      loc.num_begin = vt.raw_begin(amount.begin);
      loc.num_end = vt.raw_end(amount.end - 1);
      loc.int_begin = loc.num_begin;
      loc.int_end = vt.raw_end(amount.int_end - 1);
      loc.int_digits = amount.int_digits;
      loc.number_after_clue = after;
      loc.amount_minor = amount.minor;
      return loc;
    };

    // Number after the clue: "$ 125", "&euro;12.80".
    std::size_t fwd = occ_end;
    while (fwd < vt.text.size() && is_space(vt.text[fwd])) ++fwd;
    if (auto amount = parse_amount(vt.text, fwd)) return build(*amount, true);

    // Number before the clue: "1.104,15 €".
    if (occ > 0) {
      std::size_t back = occ;
      while (back > 0 && is_space(vt.text[back - 1])) --back;
      std::size_t digits_end = back;
      std::size_t region = back;
      while (region > 0 && (std::isdigit(static_cast<unsigned char>(
                                vt.text[region - 1])) ||
                            vt.text[region - 1] == '.' ||
                            vt.text[region - 1] == ',' ||
                            vt.text[region - 1] == ' '))
        --region;
      for (std::size_t start = region; start < digits_end; ++start) {
        auto amount = parse_amount(vt.text, start);
        if (amount && amount->end == digits_end) return build(*amount, false);
      }
    }
    occ = occ_end;
  }
  return std::nullopt;
}

std::optional<CandidatePrice> parse_price(const Fragment& fragment) {
  auto loc = locate_price(fragment);
  if (!loc) return std::nullopt;
  return CandidatePrice{loc->amount_minor, fragment.clue.currency_code,
                        kNoFragment};
}

namespace {

struct Candidates {
  std::vector<std::size_t> survivors;
  std::map<std::pair<std::int64_t, std::string>, std::size_t> distinct;
};

Candidates collect(const std::vector<Fragment>& fragments) {
  Candidates c;
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (fragments[i].weight != 0) continue;
    auto price = parse_price(fragments[i]);
    if (!price) continue;
    c.survivors.push_back(i);
    c.distinct.try_emplace({price->amount_minor, price->currency_code}, i);
  }
  return c;
}

}  // namespace

Selection select_price(std::vector<Fragment>& fragments,
                       const std::vector<Rule>& rules) {
  for (Fragment& f : fragments) f.weight = 0;
  apply_discard(fragments, rules);

  Selection selection;
  auto finish = [&](const Candidates& c) {
    selection.candidate_count = static_cast<int>(c.distinct.size());
    selection.survivors = c.survivors;
    if (c.distinct.size() == 1) {
      std::size_t w = c.distinct.begin()->second;
      auto price = parse_price(fragments[w]);
      price->fragment_index = w;
      selection.price = price;
      selection.winner_fragment = w;
      return true;
    }
    return false;
  };

  if (finish(collect(fragments))) return selection;
  apply_recover(fragments, rules);
  selection.recover_ran = true;
  finish(collect(fragments));
  return selection;
}

}  // namespace wextract
