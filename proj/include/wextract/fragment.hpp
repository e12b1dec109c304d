#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wextract/clues.hpp"

namespace wextract {

// A slice of the source page around one clue occurrence: the innermost
// element containing it, widened to its parent when the innermost text holds
// no digit, clamped to FragmentOptions::max_length bytes.
struct Fragment {
  std::string html;
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;
  Clue clue;
  int weight = 0;
};

struct FragmentOptions {
  std::size_t max_length = 1000;
  bool widen_digitless = true;  // superfragment rule
};

// One fragment per clue occurrence in the page's text content, ordered by
// start offset. Malformed HTML never fails; the scanner auto-closes
// mismatched tags.
std::vector<Fragment> extract_fragments(std::string_view html,
                                        const std::vector<Clue>& clues,
                                        const FragmentOptions& options = {});

}  // namespace wextract
