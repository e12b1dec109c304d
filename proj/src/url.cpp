#include "wextract/url.hpp"

#include <algorithm>
#include <cctype>

namespace wextract {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool valid_host(const std::string& h) {
  if (h.empty()) return false;
  return std::all_of(h.begin(), h.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '-';
  });
}

}  // namespace

std::optional<PageUrl> PageUrl::parse(const std::string& raw) {
  auto scheme_end = raw.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) return std::nullopt;
  std::string scheme = lowercase(raw.substr(0, scheme_end));
  std::string rest = raw.substr(scheme_end + 3);

  PageUrl url;
  url.raw = raw;
  url.scheme = scheme;

  if (scheme == "file") {
    if (rest.empty()) return std::nullopt;
    url.path = rest;
    return url;
  }
  if (scheme != "http" && scheme != "https") return std::nullopt;

  auto path_start = rest.find('/');
  std::string authority =
      path_start == std::string::npos ? rest : rest.substr(0, path_start);
  url.path = path_start == std::string::npos ? "/" : rest.substr(path_start);

  auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    std::string port_str = authority.substr(colon + 1);
    if (port_str.empty() ||
        !std::all_of(port_str.begin(), port_str.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
      return std::nullopt;
    url.port = std::stoi(port_str);
    authority = authority.substr(0, colon);
  }
  url.host = lowercase(authority);
  if (!url.host.empty() && url.host.back() == '.') url.host.pop_back();
  if (!valid_host(url.host)) return std::nullopt;
  return url;
}

}  // namespace wextract
