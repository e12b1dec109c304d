#include "wextract/orchestrator.hpp"

#include <stdexcept>

namespace wextract {

RefreshMode refresh_mode_from_string(const std::string& s) {
  if (s == "literal") return RefreshMode::literal;
  if (s == "refresh" || s == "refresh-on-success")
    return RefreshMode::refresh_on_success;
  throw std::invalid_argument("unknown refresh mode: " + s);
}

std::string to_string(RefreshMode mode) {
  return mode == RefreshMode::literal ? "literal" : "refresh-on-success";
}

void OrchestratorConfig::validate() const {
  if (social_validity <= 0 || social_validity >= pattern_validity)
    throw std::invalid_argument(
        "validities must satisfy 0 < social_validity < pattern_validity");
}

LiveBackend::LiveBackend(Fetcher& fetcher, std::vector<Clue> clues,
                         std::vector<Rule> rules, FragmentOptions fragment_options,
                         PatternOptions pattern_options)
    : fetcher_(fetcher),
      clues_(std::move(clues)),
      rules_(std::move(rules)),
      fragment_options_(fragment_options),
      pattern_options_(pattern_options) {}

bool LiveBackend::is_available(const PageUrl& url) {
  return fetcher_.is_available(url);
}

std::optional<RawHtml> LiveBackend::fetch(const PageUrl& url, Timestamp) {
  return fetcher_.fetch(url);
}

std::optional<CandidatePrice> LiveBackend::apply_pattern(
    const RawHtml& html, const PointingPattern& pattern) {
  return wextract::apply_pattern(html.body, pattern);
}

ScratchExtraction LiveBackend::from_scratch(const RawHtml& html,
                                            const PageUrl& url, Timestamp now) {
  std::vector<Fragment> fragments =
      extract_fragments(html.body, clues_, fragment_options_);
  Selection selection = select_price(fragments, rules_);

  ScratchExtraction result;
  result.candidate_count = selection.candidate_count;
  result.fragment_count = fragments.size();
  if (selection.price) {
    result.price = selection.price;
    result.pattern = derive_pattern(fragments[selection.winner_fragment],
                                    *selection.price, url, now, pattern_options_);
  }
  return result;
}

ExtractionOutcome extract(const PageUrl& url, const std::string& entity,
                          Timestamp now, const OrchestratorConfig& config,
                          SocialStore& social, PatternStore& patterns,
                          Backend& backend) {
  config.validate();
  const bool refresh = config.refresh_mode == RefreshMode::refresh_on_success;
  const Boundary boundary = refresh ? Boundary::inclusive : Boundary::strict;

  ExtractionOutcome outcome;
  outcome.url = url;
  outcome.decided_at = now;

  if (!backend.is_available(url)) {
    outcome.code = SuccessCode::unavailable;
    outcome.tier_trace.push_back({"availability", false, "page not available"});
    return outcome;
  }
  outcome.tier_trace.push_back({"availability", true, ""});

  // Tier 3: social cache.
  if (auto record = social.get(url, now, config.social_validity, boundary)) {
    if (refresh) {
      social.put({record->entity, url, record->price, now});
      if (auto pattern = patterns.peek(url)) {
        pattern->pattern.created_at = now;
        patterns.put(*pattern);
      }
    }
    outcome.code = SuccessCode::social;
    outcome.price = record->price;
    outcome.tier_trace.push_back({"social", true, "cached price is fresh"});
    return outcome;
  }
  outcome.tier_trace.push_back({"social", false, "no fresh record"});

  std::optional<RawHtml> html;

  // Tier 2: pointing pattern.
  if (auto record = patterns.get(url, now, config.pattern_validity, boundary)) {
    html = backend.fetch(url, now);
    if (!html) {
      outcome.code = SuccessCode::unavailable;
      outcome.tier_trace.push_back({"pattern", false, "fetch failed"});
      return outcome;
    }
    if (auto price = backend.apply_pattern(*html, record->pattern)) {
      if (refresh) {
        std::string social_entity = entity;
        if (social_entity.empty()) {
          if (auto previous = social.peek(url)) social_entity = previous->entity;
        }
        social.put({social_entity, url, *price, now});
        record->pattern.created_at = now;
        patterns.put(*record);
      }
      outcome.code = SuccessCode::pointing_pattern;
      outcome.price = price;
      outcome.tier_trace.push_back({"pattern", true, "pattern matched"});
      return outcome;
    }
    outcome.tier_trace.push_back({"pattern", false, "pattern did not match"});
  } else {
    outcome.tier_trace.push_back({"pattern", false, "no fresh pattern"});
  }

  // Tier 1: from scratch. The raw HTML from the pattern tier is reused.
  if (!html) {
    html = backend.fetch(url, now);
    if (!html) {
      outcome.code = SuccessCode::unavailable;
      outcome.tier_trace.push_back({"scratch", false, "fetch failed"});
      return outcome;
    }
  }
  ScratchExtraction scratch = backend.from_scratch(*html, url, now);
  if (scratch.price) {
    if (scratch.pattern) patterns.put({url, *scratch.pattern});
    social.put({entity, url, *scratch.price, now});
    outcome.code = SuccessCode::from_scratch;
    outcome.price = scratch.price;
    outcome.tier_trace.push_back({"scratch", true, "unique candidate"});
    return outcome;
  }
  outcome.code = SuccessCode::not_found;
  outcome.tier_trace.push_back(
      {"scratch", false,
       "candidate count " + std::to_string(scratch.candidate_count)});
  return outcome;
}

}  // namespace wextract
