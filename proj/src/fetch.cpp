#include "wextract/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "wextract/http_lib.hpp"

namespace wextract {

namespace {

// Declared charset, or "" when the header does not say.
std::string charset_of(const std::string& content_type) {
  std::string lower = content_type;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  auto pos = lower.find("charset=");
  if (pos == std::string::npos) return "";
  std::size_t start = pos + 8;
  std::size_t end = start;
  while (end < lower.size() && lower[end] != ';' &&
         !std::isspace(static_cast<unsigned char>(lower[end])))
    ++end;
  std::string cs = lower.substr(start, end - start);
  if (!cs.empty() && cs.front() == '"') cs.erase(cs.begin());
  if (!cs.empty() && cs.back() == '"') cs.pop_back();
  return cs;
}

std::string latin1_to_utf8(const std::string& in) {
  std::string out;
  out.reserve(in.size());
  for (unsigned char c : in) {
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
  }
  return out;
}

}  // namespace

Fetcher::Fetcher(FetchOptions options, std::function<Timestamp()> clock)
    : options_(std::move(options)), clock_(std::move(clock)) {}

void Fetcher::map_url(const std::string& url,
                      const std::filesystem::path& local_path) {
  corpus_[url] = local_path;
}

Timestamp Fetcher::next_timestamp() {
  // fetched_at is monotone across successive fetches in one run even if the
  // clock steps backwards.
  Timestamp now = clock_();
  Timestamp prev = last_fetch_.load();
  while (true) {
    Timestamp next = std::max(now, prev);
    if (last_fetch_.compare_exchange_weak(prev, next)) return next;
  }
}

bool Fetcher::is_available(const PageUrl& url) {
  try {
    if (url.is_file()) {
      std::error_code ec;
      auto size = std::filesystem::file_size(url.path, ec);
      return !ec && size > 0;
    }
    auto it = corpus_.find(url.raw);
    if (it != corpus_.end()) {
      std::error_code ec;
      auto size = std::filesystem::file_size(it->second, ec);
      return !ec && size > 0;
    }
    return fetch_http(url).has_value();
  } catch (...) {
    return false;
  }
}

std::optional<RawHtml> Fetcher::fetch(const PageUrl& url) {
  try {
    if (url.is_file()) return fetch_local(url.path);
    auto it = corpus_.find(url.raw);
    if (it != corpus_.end()) return fetch_local(it->second);
    return fetch_http(url);
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<RawHtml> Fetcher::fetch_local(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  RawHtml html;
  html.body = buf.str();
  if (html.body.empty()) return std::nullopt;
  html.fetched_at = next_timestamp();
  html.source = RawHtml::Source::local_file;
  html.final_url = path.string();
  return html;
}

std::optional<RawHtml> Fetcher::fetch_http(const PageUrl& url) {
  std::string scheme = url.scheme;
  std::string host = url.host;
  int port = url.port != 0 ? url.port : (scheme == "https" ? 443 : 80);
  std::string path = url.path.empty() ? "/" : url.path;

  for (int hop = 0; hop <= options_.max_redirects; ++hop) {
#ifndef WEXTRACT_HAVE_OPENSSL
    if (scheme == "https") return std::nullopt;
#endif
    std::string origin = scheme + "://" + host + ":" + std::to_string(port);
    httplib::Client client(origin);
    client.set_follow_location(false);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);
    client.set_default_headers({{"User-Agent", options_.user_agent}});

    auto res = client.Get(path);
    if (!res) return std::nullopt;

    if (res->status >= 300 && res->status < 400 && res->has_header("Location")) {
      if (hop == options_.max_redirects) return std::nullopt;
      std::string location = res->get_header_value("Location");
      if (location.rfind("http://", 0) == 0 ||
          location.rfind("https://", 0) == 0) {
        auto next = PageUrl::parse(location);
        if (!next) return std::nullopt;
        scheme = next->scheme;
        host = next->host;
        port = next->port != 0 ? next->port : (scheme == "https" ? 443 : 80);
        path = next->path;
      } else if (!location.empty() && location[0] == '/') {
        path = location;
      } else {
        return std::nullopt;
      }
      continue;
    }

    if (res->status < 200 || res->status >= 300) return std::nullopt;
    if (res->body.empty()) return std::nullopt;

    RawHtml html;
    html.body = res->body;
    std::string cs = charset_of(res->get_header_value("Content-Type"));
    if (cs == "iso-8859-1" || cs == "latin1" || cs == "latin-1" ||
        cs == "windows-1252")
      html.body = latin1_to_utf8(html.body);
    html.fetched_at = next_timestamp();
    html.source = RawHtml::Source::network;
    bool default_port = (scheme == "https" && port == 443) ||
                        (scheme == "http" && port == 80);
    html.final_url = scheme + "://" + host +
                     (default_port ? "" : ":" + std::to_string(port)) + path;
    return html;
  }
  return std::nullopt;
}

}  // namespace wextract
