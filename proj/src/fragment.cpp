#include "wextract/fragment.hpp"

#include <algorithm>
#include <cctype>

#include "wextract/html_text.hpp"

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

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

std::size_t quote_aware_tag_end(std::string_view html, std::size_t pos) {
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

struct Element {
  std::size_t open_start = 0;
  std::size_t open_end = 0;   // one past '>' of the open tag
  std::size_t inner_end = 0;  // start of the close tag (or auto-close point)
  std::size_t end = 0;        // one past the element, close tag included
  int parent = -1;
  std::string name;
};

struct TextSegment {
  std::size_t begin = 0;
  std::size_t end = 0;
  int element = -1;  // innermost open element, -1 at top level
};

struct Scan {
  std::vector<Element> elements;
  std::vector<TextSegment> segments;
};

// Single pass over the page: builds the element tree (stack of open tags,
// auto-close on mismatched or missing close tags) and the text segments
// between tags. script/style contents are skipped wholesale.
Scan scan_html(std::string_view html) {
  Scan scan;
  std::vector<int> stack;
  std::size_t pos = 0;
  std::size_t text_start = 0;

  auto flush_text = [&](std::size_t upto) {
    if (upto > text_start)
      scan.segments.push_back(
          {text_start, upto, stack.empty() ? -1 : stack.back()});
  };

  while (pos < html.size()) {
    if (html[pos] != '<') {
      ++pos;
      continue;
    }
    std::size_t rest = html.size() - pos;
    if (rest >= 4 && html.substr(pos, 4) == "<!--") {
      flush_text(pos);
      std::size_t close = html.find("-->", pos + 4);
      pos = close == std::string_view::npos ? html.size() : close + 3;
      text_start = pos;
      continue;
    }
    if (rest >= 2 && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
      flush_text(pos);
      std::size_t end = quote_aware_tag_end(html, pos);
      pos = end == std::string_view::npos ? html.size() : end;
      text_start = pos;
      continue;
    }
    if (rest >= 2 && html[pos + 1] == '/') {
      std::size_t name_start = pos + 2;
      std::size_t name_end = name_start;
      while (name_end < html.size() && is_name_char(html[name_end]))
        ++name_end;
      std::size_t end = quote_aware_tag_end(html, pos);
      if (name_end == name_start || end == std::string_view::npos) {
        ++pos;  // stray "</": literal text
        continue;
      }
      flush_text(pos);
      std::string name = lowercase(html.substr(name_start, name_end - name_start));
      int match = -1;
      for (int i = static_cast<int>(stack.size()) - 1; i >= 0; --i) {
        if (scan.elements[stack[i]].name == name) {
          match = i;
          break;
        }
      }
      if (match >= 0) {
        // Elements opened above the match are auto-closed just before the
        // close tag.
        while (static_cast<int>(stack.size()) > match + 1) {
          Element& e = scan.elements[stack.back()];
          e.inner_end = pos;
          e.end = pos;
          stack.pop_back();
        }
        Element& e = scan.elements[stack.back()];
        e.inner_end = pos;
        e.end = end;
        stack.pop_back();
      }
      pos = end;
      text_start = pos;
      continue;
    }
    if (rest >= 2 && is_alpha(html[pos + 1])) {
      std::size_t name_end = pos + 1;
      while (name_end < html.size() && is_name_char(html[name_end])) ++name_end;
      std::size_t end = quote_aware_tag_end(html, pos);
      if (end == std::string_view::npos) {
        ++pos;  // unterminated: literal text
        continue;
      }
      flush_text(pos);
      std::string name = lowercase(html.substr(pos + 1, name_end - pos - 1));
      bool self_closing = end >= 2 && html[end - 2] == '/';

      Element elem;
      elem.open_start = pos;
      elem.open_end = end;
      elem.parent = stack.empty() ? -1 : stack.back();
      elem.name = name;
      int idx = static_cast<int>(scan.elements.size());

      if (name == "script" || name == "style") {
        std::size_t i = end;
        std::size_t close_start = html.size();
        std::size_t close_end = html.size();
        while (i < html.size()) {
          i = html.find('<', i);
          if (i == std::string_view::npos) break;
          if (i + 2 < html.size() && html[i + 1] == '/' &&
              iequals(html.substr(i + 2, name.size()), name)) {
            close_start = i;
            std::size_t e2 = quote_aware_tag_end(html, i);
            close_end = e2 == std::string_view::npos ? html.size() : e2;
            break;
          }
          ++i;
        }
        elem.inner_end = close_start;
        elem.end = close_end;
        scan.elements.push_back(std::move(elem));
        pos = close_end;
        text_start = pos;
        continue;
      }

      if (self_closing || is_void_tag(name)) {
        elem.inner_end = end;
        elem.end = end;
        scan.elements.push_back(std::move(elem));
      } else {
        scan.elements.push_back(std::move(elem));
        stack.push_back(idx);
      }
      pos = end;
      text_start = pos;
      continue;
    }
    ++pos;  // lone '<'
  }
  flush_text(html.size());
  while (!stack.empty()) {
    Element& e = scan.elements[stack.back()];
    e.inner_end = html.size();
    e.end = html.size();
    stack.pop_back();
  }
  return scan;
}

bool element_text_has_digit(std::string_view html, const Element& e) {
  std::string_view inner = html.substr(e.open_end, e.inner_end - e.open_end);
  VisibleText vt = visible_text(inner);
  return std::any_of(vt.text.begin(), vt.text.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

struct Occurrence {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t clue_index = 0;
  int element = -1;
};

}  // namespace

std::vector<Fragment> extract_fragments(std::string_view html,
                                        const std::vector<Clue>& clues,
                                        const FragmentOptions& options) {
  const std::size_t cap = std::max<std::size_t>(options.max_length, 16);
  Scan scan = scan_html(html);

  std::vector<Occurrence> occurrences;
  for (std::size_t ci = 0; ci < clues.size(); ++ci) {
    for (const std::string& variant : clue_variants(clues[ci])) {
      for (const TextSegment& seg : scan.segments) {
        std::string_view window = html.substr(seg.begin, seg.end - seg.begin);
        std::size_t from = 0;
        while (true) {
          std::size_t hit = window.find(variant, from);
          if (hit == std::string_view::npos) break;
          occurrences.push_back({seg.begin + hit,
                                 seg.begin + hit + variant.size(), ci,
                                 seg.element});
          from = hit + variant.size();
        }
      }
    }
  }
  std::sort(occurrences.begin(), occurrences.end(),
            [](const Occurrence& a, const Occurrence& b) {
              return a.begin != b.begin ? a.begin < b.begin
                                        : a.clue_index < b.clue_index;
            });
  // The same bytes can match several clue entries (e.g. "&euro;" for both a
  // "€" and an "&euro;" clue); the first clue in file order wins.
  occurrences.erase(std::unique(occurrences.begin(), occurrences.end(),
                                [](const Occurrence& a, const Occurrence& b) {
                                  return a.begin == b.begin;
                                }),
                    occurrences.end());

  std::vector<Fragment> fragments;
  fragments.reserve(occurrences.size());
  for (const Occurrence& occ : occurrences) {
    std::size_t span_begin = 0;
    std::size_t span_end = html.size();
    if (occ.element >= 0) {
      const Element* elem = &scan.elements[occ.element];
      if (options.widen_digitless && !element_text_has_digit(html, *elem) &&
          elem->parent >= 0) {
        const Element& parent = scan.elements[elem->parent];
        if (parent.end - parent.open_start <= cap) elem = &parent;
      }
      span_begin = elem->open_start;
      span_end = elem->end;
    }
    if (span_end - span_begin > cap) {
      // Window of at most `cap` bytes inside the span, holding the clue.
      std::size_t occ_len = occ.end - occ.begin;
      std::size_t half = (cap - std::min(occ_len, cap)) / 2;
      std::size_t s = occ.begin - std::min(half, occ.begin - span_begin);
      span_begin = s;
      span_end = std::min(span_end, s + cap);
    }
    Fragment frag;
    frag.html = std::string(html.substr(span_begin, span_end - span_begin));
    frag.start_offset = span_begin;
    frag.end_offset = span_end;
    frag.clue = clues[occ.clue_index];
    frag.weight = 0;
    fragments.push_back(std::move(frag));
  }
  std::stable_sort(fragments.begin(), fragments.end(),
                   [](const Fragment& a, const Fragment& b) {
                     return a.start_offset < b.start_offset;
                   });
  return fragments;
}

}  // namespace wextract
