#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wextract {

// A currency marker to scan pages for: a symbol, an HTML entity or an ISO
// code, mapped to the ISO-4217 code of the currency it denotes.
struct Clue {
  std::string text;
  std::string currency_code;

  friend bool operator==(const Clue&, const Clue&) = default;
};

// Clue file grammar: one "symbol,CODE" pair per line, '#' comments, blank
// lines ignored. Duplicate pairs collapse; order is preserved.
std::vector<Clue> parse_clues(std::string_view content,
                              std::string_view origin = "clues");
std::vector<Clue> load_clues(const std::filesystem::path& path);

// $, €, &euro;, £, USD, EUR, GBP.
const std::vector<Clue>& default_clues();

// Byte strings that count as an occurrence of the clue in raw HTML: the clue
// text itself plus encoded/decoded forms of the currency character.
std::vector<std::string> clue_variants(const Clue& clue);

}  // namespace wextract
