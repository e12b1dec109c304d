#include "wextract/html_text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

namespace wextract {

namespace {

bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_name_char(char c) {
  return is_alpha(c) || (c >= '0' && c <= '9') || c == '-' || c == ':';
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

const std::unordered_map<std::string, std::string>& named_entities() {
  static const std::unordered_map<std::string, std::string> table = {
      {"amp", "&"},     {"lt", "<"},      {"gt", ">"},     {"quot", "\""},
      {"apos", "'"},    {"nbsp", " "},    {"euro", "\xE2\x82\xAC"},
      {"pound", "\xC2\xA3"},              {"yen", "\xC2\xA5"},
      {"cent", "\xC2\xA2"},               {"dollar", "$"},
  };
  return table;
}

std::string encode_utf8(std::uint32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

// Decodes an entity at s[pos] (which is '&'). Returns decoded text and the
// length consumed, or nullopt if it is not a well-formed entity.
std::optional<std::pair<std::string, std::size_t>> decode_entity_at(
    std::string_view s, std::size_t pos) {
  std::size_t semi = s.find(';', pos + 1);
  if (semi == std::string_view::npos || semi - pos > 12) return std::nullopt;
  std::string_view body = s.substr(pos + 1, semi - pos - 1);
  if (body.empty()) return std::nullopt;
  if (body[0] == '#') {
    std::uint32_t cp = 0;
    bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
    std::size_t i = hex ? 2 : 1;
    if (i >= body.size()) return std::nullopt;
    for (; i < body.size(); ++i) {
      char c = body[i];
      std::uint32_t digit;
      if (c >= '0' && c <= '9')
        digit = c - '0';
      else if (hex && c >= 'a' && c <= 'f')
        digit = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F')
        digit = c - 'A' + 10;
      else
        return std::nullopt;
      cp = cp * (hex ? 16 : 10) + digit;
      if (cp > 0x10FFFF) return std::nullopt;
    }
    if (cp == 0xA0) return std::make_pair(std::string(" "), semi - pos + 1);
    return std::make_pair(encode_utf8(cp), semi - pos + 1);
  }
  auto it = named_entities().find(lowercase(body));
  if (it == named_entities().end()) return std::nullopt;
  return std::make_pair(it->second, semi - pos + 1);
}

// Emits decoded text for a raw text region into a VisibleText.
void emit_text(VisibleText& out, std::string_view html, std::size_t begin,
               std::size_t end) {
  std::size_t i = begin;
  while (i < end) {
    if (html[i] == '&') {
      if (auto ent = decode_entity_at(html, i)) {
        for (char c : ent->first) {
          out.text += c;
          out.map.emplace_back(static_cast<std::uint32_t>(i),
                               static_cast<std::uint32_t>(i + ent->second));
        }
        i += ent->second;
        continue;
      }
    }
    out.text += html[i];
    out.map.emplace_back(static_cast<std::uint32_t>(i),
                         static_cast<std::uint32_t>(i + 1));
    ++i;
  }
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

// Position one past the closing '>' of the tag starting at `pos`, respecting
// quoted attribute values. npos when the tag never closes.
std::size_t tag_end(std::string_view html, std::size_t pos) {
  char quote = 0;
  for (std::size_t i = pos; i < html.size(); ++i) {
    char c = html[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      return i + 1;
    }
  }
  return std::string_view::npos;
}

// Skips the raw content of <script>/<style>, returning one past the matching
// close tag (or end of input).
std::size_t skip_raw_content(std::string_view html, std::size_t from,
                             std::string_view name) {
  std::size_t i = from;
  while (i + 2 + name.size() <= html.size()) {
    i = html.find('<', i);
    if (i == std::string_view::npos) return html.size();
    if (i + 2 + name.size() <= html.size() && html[i + 1] == '/' &&
        iequals(html.substr(i + 2, name.size()), name)) {
      std::size_t end = tag_end(html, i);
      return end == std::string_view::npos ? html.size() : end;
    }
    ++i;
  }
  return html.size();
}

}  // namespace

std::string decode_entities(std::string_view s) {
  VisibleText tmp;
  emit_text(tmp, s, 0, s.size());
  return std::move(tmp.text);
}

std::optional<std::string> decode_single_entity(std::string_view s) {
  if (s.size() < 3 || s[0] != '&' || s.back() != ';') return std::nullopt;
  auto decoded = decode_entity_at(s, 0);
  if (!decoded || decoded->second != s.size()) return std::nullopt;
  return decoded->first;
}

VisibleText visible_text(std::string_view html) {
  VisibleText out;
  out.text.reserve(html.size());
  std::size_t pos = 0;
  std::size_t text_start = 0;
  while (pos < html.size()) {
    if (html[pos] != '<') {
      ++pos;
      continue;
    }
    std::size_t rest = html.size() - pos;
    if (rest >= 4 && html.substr(pos, 4) == "<!--") {
      emit_text(out, html, text_start, pos);
      std::size_t close = html.find("-->", pos + 4);
      pos = close == std::string_view::npos ? html.size() : close + 3;
      text_start = pos;
      continue;
    }
    if (rest >= 2 && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
      emit_text(out, html, text_start, pos);
      std::size_t end = tag_end(html, pos);
      pos = end == std::string_view::npos ? html.size() : end;
      text_start = pos;
      continue;
    }
    if (rest >= 2 && (is_alpha(html[pos + 1]) || html[pos + 1] == '/')) {
      std::size_t name_at = pos + (html[pos + 1] == '/' ? 2 : 1);
      std::size_t name_end = name_at;
      while (name_end < html.size() && is_name_char(html[name_end])) ++name_end;
      if (name_end == name_at) {  // "</>" or stray "<"
        ++pos;
        continue;
      }
      std::size_t end = tag_end(html, pos);
      if (end == std::string_view::npos) {  // unterminated tag: literal text
        ++pos;
        continue;
      }
      emit_text(out, html, text_start, pos);
      std::string name = lowercase(html.substr(name_at, name_end - name_at));
      if (html[pos + 1] != '/' && (name == "script" || name == "style"))
        end = skip_raw_content(html, end, name);
      pos = end;
      text_start = pos;
      continue;
    }
    ++pos;  // literal '<'
  }
  emit_text(out, html, text_start, html.size());
  return out;
}

std::optional<OpenTag> parse_open_tag(std::string_view html) {
  if (html.size() < 3 || html[0] != '<' || !is_alpha(html[1])) return std::nullopt;
  std::size_t name_end = 1;
  while (name_end < html.size() && is_name_char(html[name_end])) ++name_end;
  std::size_t end = tag_end(html, 0);
  if (end == std::string_view::npos) return std::nullopt;

  OpenTag tag;
  tag.name = lowercase(html.substr(1, name_end - 1));
  tag.end = end;
  std::size_t close = end - 1;  // at '>'
  std::size_t attrs_end = close;
  if (attrs_end > name_end && html[attrs_end - 1] == '/') {
    tag.self_closing = true;
    --attrs_end;
  }
  std::size_t attrs_begin = name_end;
  while (attrs_begin < attrs_end &&
         std::isspace(static_cast<unsigned char>(html[attrs_begin])))
    ++attrs_begin;
  while (attrs_end > attrs_begin &&
         std::isspace(static_cast<unsigned char>(html[attrs_end - 1])))
    --attrs_end;
  tag.attrs_begin = attrs_begin;
  tag.attrs_end = attrs_end;
  return tag;
}

std::optional<std::string> attr_value(std::string_view attrs,
                                      std::string_view name) {
  std::size_t i = 0;
  while (i < attrs.size()) {
    while (i < attrs.size() &&
           std::isspace(static_cast<unsigned char>(attrs[i])))
      ++i;
    std::size_t key_start = i;
    while (i < attrs.size() && attrs[i] != '=' &&
           !std::isspace(static_cast<unsigned char>(attrs[i])))
      ++i;
    std::string_view key = attrs.substr(key_start, i - key_start);
    while (i < attrs.size() &&
           std::isspace(static_cast<unsigned char>(attrs[i])))
      ++i;
    std::string value;
    if (i < attrs.size() && attrs[i] == '=') {
      ++i;
      while (i < attrs.size() &&
             std::isspace(static_cast<unsigned char>(attrs[i])))
        ++i;
      if (i < attrs.size() && (attrs[i] == '"' || attrs[i] == '\'')) {
        char quote = attrs[i++];
        std::size_t val_start = i;
        while (i < attrs.size() && attrs[i] != quote) ++i;
        value = std::string(attrs.substr(val_start, i - val_start));
        if (i < attrs.size()) ++i;
      } else {
        std::size_t val_start = i;
        while (i < attrs.size() &&
               !std::isspace(static_cast<unsigned char>(attrs[i])))
          ++i;
        value = std::string(attrs.substr(val_start, i - val_start));
      }
    }
    if (!key.empty() && iequals(key, name)) return value;
  }
  return std::nullopt;
}

bool is_void_tag(std::string_view name) {
  static const std::array<std::string_view, 14> kVoid = {
      "area", "base",  "br",    "col",  "embed",  "hr",    "img",
      "input", "link", "meta", "param", "source", "track", "wbr"};
  return std::find(kVoid.begin(), kVoid.end(), name) != kVoid.end();
}

}  // namespace wextract
