#pragma once

#include <optional>
#include <string>

namespace wextract {

// Absolute URL of a detail page. http(s) URLs carry a non-empty lowercase
// host; file URLs address local fixtures and have an empty host.
struct PageUrl {
  std::string raw;
  std::string scheme;  // "http", "https" or "file"
  std::string host;    // lowercased, without port
  int port = 0;        // 0 = scheme default
  std::string path;    // path + query for http(s); filesystem path for file

  static std::optional<PageUrl> parse(const std::string& raw);

  bool is_file() const { return scheme == "file"; }

  friend bool operator==(const PageUrl& a, const PageUrl& b) {
    return a.raw == b.raw;
  }
};

}  // namespace wextract
