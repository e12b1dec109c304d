#include "wextract/clues.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "wextract/html_text.hpp"

namespace wextract {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool valid_code(const std::string& code) {
  return code.size() == 3 && std::all_of(code.begin(), code.end(), [](char c) {
           return c >= 'A' && c <= 'Z';
         });
}

// Alternate encodings per currency character.
const std::unordered_map<std::string, std::vector<std::string>>&
symbol_encodings() {
  static const std::unordered_map<std::string, std::vector<std::string>> table =
      {
          {"$", {"&#36;", "&#x24;", "&dollar;"}},
          {"\xE2\x82\xAC", {"&euro;", "&#8364;", "&#x20AC;"}},
          {"\xC2\xA3", {"&pound;", "&#163;", "&#xA3;"}},
          {"\xC2\xA5", {"&yen;", "&#165;", "&#xA5;"}},
          {"\xC2\xA2", {"&cent;", "&#162;", "&#xA2;"}},
      };
  return table;
}

}  // namespace

std::vector<Clue> parse_clues(std::string_view content, std::string_view origin) {
  std::vector<Clue> clues;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    ++line_no;
    std::string line = trim(content.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line[0] == '#') {
      if (eol == content.size()) break;
      continue;
    }
    auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw std::runtime_error(std::string(origin) + ":" +
                               std::to_string(line_no) +
                               ": expected 'symbol,CODE'");
    Clue clue{trim(line.substr(0, comma)), trim(line.substr(comma + 1))};
    if (clue.text.empty())
      throw std::runtime_error(std::string(origin) + ":" +
                               std::to_string(line_no) + ": empty clue text");
    if (!valid_code(clue.currency_code))
      throw std::runtime_error(std::string(origin) + ":" +
                               std::to_string(line_no) +
                               ": currency code must be three uppercase letters");
    if (std::find(clues.begin(), clues.end(), clue) == clues.end())
      clues.push_back(std::move(clue));
    if (eol == content.size()) break;
  }
  return clues;
}

std::vector<Clue> load_clues(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open clue file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_clues(buf.str(), path.filename().string());
}

const std::vector<Clue>& default_clues() {
  static const std::vector<Clue> defaults = {
      {"$", "USD"},          {"\xE2\x82\xAC", "EUR"}, {"&euro;", "EUR"},
      {"\xC2\xA3", "GBP"},   {"USD", "USD"},          {"EUR", "EUR"},
      {"GBP", "GBP"},
  };
  return defaults;
}

std::vector<std::string> clue_variants(const Clue& clue) {
  std::vector<std::string> variants{clue.text};
  std::string canonical = clue.text;
  if (auto decoded = decode_single_entity(clue.text)) canonical = *decoded;

  auto it = symbol_encodings().find(canonical);
  if (it != symbol_encodings().end()) {
    auto add = [&variants](const std::string& v) {
      if (std::find(variants.begin(), variants.end(), v) == variants.end())
        variants.push_back(v);
    };
    add(canonical);
    for (const auto& enc : it->second) add(enc);
  }
  return variants;
}

}  // namespace wextract
