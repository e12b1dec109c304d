#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wextract/fetch.hpp"
#include "wextract/fragment.hpp"
#include "wextract/pattern.hpp"
#include "wextract/rules.hpp"
#include "wextract/store.hpp"
#include "wextract/timestamp.hpp"
#include "wextract/url.hpp"

namespace wextract {

// Outcome label of a tiered extraction.
//   -1 page unavailable, 0 no price found, 1 from scratch,
//    2 pointing pattern, 3 social cache.
enum class SuccessCode : int {
  unavailable = -1,
  not_found = 0,
  from_scratch = 1,
  pointing_pattern = 2,
  social = 3,
};

// literal: stores are written only after a from-scratch success, freshness
// boundaries strict.
// refresh_on_success: cache hits (codes 2 and 3) also renew both store
// timestamps, and a record of age exactly `validity` still counts as fresh.
enum class RefreshMode { literal, refresh_on_success };

RefreshMode refresh_mode_from_string(const std::string& s);
std::string to_string(RefreshMode mode);

struct OrchestratorConfig {
  Timestamp social_validity = 3600;
  Timestamp pattern_validity = 86400;
  RefreshMode refresh_mode = RefreshMode::refresh_on_success;

  // Throws std::invalid_argument unless 0 < social < pattern.
  void validate() const;
};

struct TierAttempt {
  std::string tier;  // "availability", "social", "pattern", "scratch"
  bool hit = false;
  std::string reason;
};

struct ExtractionOutcome {
  SuccessCode code = SuccessCode::not_found;
  std::optional<CandidatePrice> price;
  PageUrl url;
  Timestamp decided_at = 0;
  std::vector<TierAttempt> tier_trace;
};

// From-scratch result: the price and, when one was found, the pointing
// pattern derived from the winning fragment.
struct ScratchExtraction {
  std::optional<CandidatePrice> price;
  std::optional<PointingPattern> pattern;
  int candidate_count = 0;
  std::size_t fragment_count = 0;
};

// The extraction machinery behind the tier algorithm. Swapped out by the
// simulator and by call-counting test doubles.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual bool is_available(const PageUrl& url) = 0;
  virtual std::optional<RawHtml> fetch(const PageUrl& url, Timestamp now) = 0;
  virtual std::optional<CandidatePrice> apply_pattern(
      const RawHtml& html, const PointingPattern& pattern) = 0;
  virtual ScratchExtraction from_scratch(const RawHtml& html, const PageUrl& url,
                                         Timestamp now) = 0;
};

// Production backend: fetcher + clue store + rule set + pattern derivation.
class LiveBackend : public Backend {
 public:
  LiveBackend(Fetcher& fetcher, std::vector<Clue> clues, std::vector<Rule> rules,
              FragmentOptions fragment_options = {},
              PatternOptions pattern_options = {});

  bool is_available(const PageUrl& url) override;
  std::optional<RawHtml> fetch(const PageUrl& url, Timestamp now) override;
  std::optional<CandidatePrice> apply_pattern(
      const RawHtml& html, const PointingPattern& pattern) override;
  ScratchExtraction from_scratch(const RawHtml& html, const PageUrl& url,
                                 Timestamp now) override;

 private:
  Fetcher& fetcher_;
  std::vector<Clue> clues_;
  std::vector<Rule> rules_;
  FragmentOptions fragment_options_;
  PatternOptions pattern_options_;
};

// One tiered extraction: social cache, then pointing pattern, then the full
// from-scratch pipeline, with write-backs on success. Raw HTML is fetched at
// most once per call.
ExtractionOutcome extract(const PageUrl& url, const std::string& entity,
                          Timestamp now, const OrchestratorConfig& config,
                          SocialStore& social, PatternStore& patterns,
                          Backend& backend);

}  // namespace wextract
