#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wextract/clues.hpp"
#include "wextract/fragment.hpp"
#include "wextract/rules.hpp"
#include "wextract/url.hpp"

namespace wextract {

class Fetcher;

// One corpus page: a url, the local file that stands in for it, and optional
// ground truth.
struct ManifestEntry {
  PageUrl url;
  std::filesystem::path local_path;  // relative to the manifest
  std::optional<std::int64_t> expected_minor;
  std::optional<std::string> expected_currency;
};

struct CorpusManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  // Parse + validate: urls unique, every path exists. Throws on violations.
  static CorpusManifest load(const std::filesystem::path& path);

  std::filesystem::path resolve(const ManifestEntry& entry) const {
    return root / entry.local_path;
  }
};

// Registers every entry in the fetcher's corpus index.
void install_corpus(const CorpusManifest& manifest, Fetcher& fetcher);

enum class CorpusScore { exact, miss, unscored };

struct CorpusEntryResult {
  std::string url;
  bool found = false;
  std::int64_t amount_minor = 0;
  std::string currency;
  int candidate_count = 0;
  std::size_t fragment_count = 0;
  bool recover_ran = false;
  CorpusScore score = CorpusScore::unscored;
};

struct CorpusReport {
  std::vector<CorpusEntryResult> entries;  // manifest order
  int exact = 0;
  int miss = 0;
  int ambiguous = 0;  // candidate_count > 1
  int unscored = 0;
};

// From-scratch extraction over every entry. `jobs` > 1 runs entries in
// parallel; aggregation is by manifest order either way.
CorpusReport run_corpus(const CorpusManifest& manifest,
                        const std::vector<Clue>& clues,
                        const std::vector<Rule>& rules,
                        const FragmentOptions& fragment_options = {},
                        int jobs = 1);

nlohmann::json report_to_json(const CorpusReport& report);
std::string report_to_text(const CorpusReport& report);

}  // namespace wextract
