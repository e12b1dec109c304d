#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wextract {

// Visible text of an HTML snippet: tags dropped, script/style contents
// dropped, character entities decoded. `map[i]` is the half-open source byte
// range that produced output byte i.
struct VisibleText {
  std::string text;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> map;

  std::size_t raw_begin(std::size_t text_pos) const { return map[text_pos].first; }
  std::size_t raw_end(std::size_t text_pos) const { return map[text_pos].second; }
};

VisibleText visible_text(std::string_view html);

// Decodes the common named entities plus numeric forms. &nbsp; becomes a
// plain space so downstream number parsing sees uniform whitespace.
std::string decode_entities(std::string_view s);

// If `s` is an entity ("&euro;", "&#8364;"), the decoded character; otherwise
// nullopt.
std::optional<std::string> decode_single_entity(std::string_view s);

struct OpenTag {
  std::string name;             // lowercased
  std::size_t attrs_begin = 0;  // offsets into the snippet
  std::size_t attrs_end = 0;
  std::size_t end = 0;          // one past '>'
  bool self_closing = false;
};

// Parses an open tag at the start of `html`. Quote-aware; tolerates missing
// attributes.
std::optional<OpenTag> parse_open_tag(std::string_view html);

// Value of attribute `name` (case-insensitive) in a raw attribute string.
std::optional<std::string> attr_value(std::string_view attrs, std::string_view name);

bool is_void_tag(std::string_view lowercased_name);

}  // namespace wextract
