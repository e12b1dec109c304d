#include "wextract/site_match.hpp"

#include <algorithm>
#include <cctype>

#include "wextract/store.hpp"

namespace wextract {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) next = s.size();
    if (next > pos) out.emplace_back(s.substr(pos, next - pos));
    if (next == s.size()) break;
    pos = next + 1;
  }
  return out;
}

std::vector<std::string> word_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string current;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

MatchAnswer to_answer(const SocialRecord& record) {
  MatchAnswer answer;
  answer.url = record.url;
  answer.price = record.price;
  answer.observed_at = record.observed_at;
  return answer;
}

}  // namespace

std::string normalize_site(std::string_view site) {
  std::string s = lowercase(site);
  auto strip_prefix = [&s](std::string_view prefix) {
    if (s.rfind(prefix, 0) == 0) s.erase(0, prefix.size());
  };
  // Trim surrounding whitespace first.
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  strip_prefix("http://");
  strip_prefix("https://");
  strip_prefix("www.");
  auto slash = s.find('/');
  if (slash != std::string::npos) s.erase(slash);
  auto colon = s.find(':');
  if (colon != std::string::npos) s.erase(colon);
  while (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

bool site_matches_host(std::string_view normalized_site, std::string_view host) {
  if (normalized_site.empty() || host.empty()) return false;
  auto site_labels = split(normalized_site, '.');
  auto host_labels = split(lowercase(host), '.');
  if (site_labels.empty()) return false;
  for (const auto& sl : site_labels) {
    bool found = std::any_of(host_labels.begin(), host_labels.end(),
                             [&sl](const std::string& hl) {
                               return hl.rfind(sl, 0) == 0;  // prefix
                             });
    if (!found) return false;
  }
  return true;
}

bool entity_matches(std::string_view query_entity,
                    std::string_view stored_entity) {
  auto tokens = word_tokens(query_entity);
  if (tokens.empty()) return false;
  std::string stored = lowercase(stored_entity);
  return std::all_of(tokens.begin(), tokens.end(),
                     [&stored](const std::string& token) {
                       return stored.find(token) != std::string::npos;
                     });
}

MatchAnswer match(const SiteQuery& query, const SocialStore& store) {
  auto records = store.find_by_site(query.entity, query.site);
  if (records.empty()) return {};
  return to_answer(records.front());
}

std::vector<MatchAnswer> match_all(const SiteQuery& query,
                                   const SocialStore& store) {
  std::vector<MatchAnswer> out;
  for (const auto& record : store.find_by_site(query.entity, query.site))
    out.push_back(to_answer(record));
  return out;
}

}  // namespace wextract
