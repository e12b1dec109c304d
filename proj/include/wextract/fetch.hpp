#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>

#include "wextract/timestamp.hpp"
#include "wextract/url.hpp"

namespace wextract {

// Raw page bytes, exactly one GET, no script execution, no asset loading.
struct RawHtml {
  std::string body;
  Timestamp fetched_at = 0;
  enum class Source { network, local_file };
  Source source = Source::network;
  std::string final_url;  // after redirects
};

struct FetchOptions {
  int timeout_seconds = 10;
  int max_redirects = 5;
  std::string user_agent = "wextract/0.1 (browserless price fetcher)";
};

// Availability probe and raw-HTML retrieval. file:// URLs and URLs mapped
// through a corpus index read from disk, so fixture corpora run offline.
// Never throws for unreachable hosts; failures are nullopt / false.
class Fetcher {
 public:
  explicit Fetcher(FetchOptions options = {},
                   std::function<Timestamp()> clock = wall_clock_now);

  // Corpus index: serve `url` from a local file instead of the network.
  void map_url(const std::string& url, const std::filesystem::path& local_path);
  std::size_t mapped_count() const { return corpus_.size(); }

  bool is_available(const PageUrl& url);
  std::optional<RawHtml> fetch(const PageUrl& url);

 private:
  FetchOptions options_;
  std::function<Timestamp()> clock_;
  std::unordered_map<std::string, std::filesystem::path> corpus_;
  std::atomic<Timestamp> last_fetch_{0};

  Timestamp next_timestamp();
  std::optional<RawHtml> fetch_local(const std::filesystem::path& path);
  std::optional<RawHtml> fetch_http(const PageUrl& url);
};

}  // namespace wextract
