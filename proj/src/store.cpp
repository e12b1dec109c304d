#include "wextract/store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

#include "wextract/site_match.hpp"

namespace wextract {

namespace {

using nlohmann::json;

json social_to_json(const SocialRecord& r) {
  return json{{"entity", r.entity},
              {"url", r.url.raw},
              {"amount_minor", r.price.amount_minor},
              {"currency", r.price.currency_code},
              {"observed_at", r.observed_at}};
}

std::optional<SocialRecord> social_from_json(const json& j) {
  if (!j.is_object()) return std::nullopt;
  auto url = PageUrl::parse(j.value("url", ""));
  if (!url) return std::nullopt;
  SocialRecord r;
  r.entity = j.value("entity", "");
  r.url = *url;
  r.price.amount_minor = j.value("amount_minor", std::int64_t{0});
  r.price.currency_code = j.value("currency", "");
  r.observed_at = j.value("observed_at", Timestamp{0});
  return r;
}

json pattern_to_json(const PatternRecord& r) {
  return json{{"url", r.url.raw},
              {"regex_source", r.pattern.regex_source},
              {"currency", r.pattern.currency_code},
              {"created_at", r.pattern.created_at}};
}

std::optional<PatternRecord> pattern_from_json(const json& j) {
  if (!j.is_object()) return std::nullopt;
  auto url = PageUrl::parse(j.value("url", ""));
  if (!url) return std::nullopt;
  PatternRecord r;
  r.url = *url;
  r.pattern.url = *url;
  r.pattern.regex_source = j.value("regex_source", "");
  r.pattern.currency_code = j.value("currency", "");
  r.pattern.created_at = j.value("created_at", Timestamp{0});
  if (r.pattern.regex_source.empty()) return std::nullopt;
  return r;
}

void append_line(const std::filesystem::path& file, const json& j) {
  std::ofstream out(file, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open store file: " + file.string());
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

template <typename Fn>
void for_each_line(const std::filesystem::path& file, Fn&& fn) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return;  // fresh store
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;  // tolerate a torn trailing line
    fn(j);
  }
}

void rewrite(const std::filesystem::path& file, const std::vector<json>& lines) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open store file: " + tmp.string());
    for (const auto& j : lines) out << j.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace

SocialStore::SocialStore(const std::filesystem::path& file)
    : file_(file), persistent_(true) {
  for_each_line(file_, [this](const json& j) {
    if (auto r = social_from_json(j)) records_[r->url.raw][r->entity] = *r;
  });
}

void SocialStore::append_locked(const SocialRecord& record) {
  if (persistent_) append_line(file_, social_to_json(record));
}

std::optional<SocialRecord> SocialStore::get(const PageUrl& url, Timestamp now,
                                             Timestamp validity,
                                             Boundary boundary) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(url.raw);
  if (it == records_.end()) return std::nullopt;
  const SocialRecord* newest = nullptr;
  for (const auto& [entity, record] : it->second)
    if (!newest || record.observed_at > newest->observed_at) newest = &record;
  if (!newest || !is_fresh(newest->observed_at, now, validity, boundary))
    return std::nullopt;
  return *newest;
}

std::optional<SocialRecord> SocialStore::peek(const PageUrl& url) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(url.raw);
  if (it == records_.end()) return std::nullopt;
  const SocialRecord* newest = nullptr;
  for (const auto& [entity, record] : it->second)
    if (!newest || record.observed_at > newest->observed_at) newest = &record;
  if (!newest) return std::nullopt;
  return *newest;
}

void SocialStore::put(const SocialRecord& record) {
  std::unique_lock lock(mu_);
  records_[record.url.raw][record.entity] = record;
  append_locked(record);
}

std::vector<SocialRecord> SocialStore::find_by_site(std::string_view entity,
                                                    std::string_view site) const {
  std::string normalized = normalize_site(site);
  std::vector<SocialRecord> out;
  {
    std::shared_lock lock(mu_);
    for (const auto& [url_raw, by_entity] : records_) {
      for (const auto& [stored_entity, record] : by_entity) {
        if (!site_matches_host(normalized, record.url.host)) continue;
        if (!entity_matches(entity, stored_entity)) continue;
        out.push_back(record);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SocialRecord& a, const SocialRecord& b) {
                     return a.observed_at > b.observed_at;
                   });
  return out;
}

std::vector<SocialRecord> SocialStore::all() const {
  std::vector<SocialRecord> out;
  {
    std::shared_lock lock(mu_);
    for (const auto& [url_raw, by_entity] : records_)
      for (const auto& [stored_entity, record] : by_entity)
        out.push_back(record);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SocialRecord& a, const SocialRecord& b) {
                     return a.observed_at > b.observed_at;
                   });
  return out;
}

void SocialStore::compact() {
  std::unique_lock lock(mu_);
  if (!persistent_) return;
  std::vector<json> lines;
  std::map<std::pair<std::string, std::string>, SocialRecord> ordered;
  for (const auto& [url_raw, by_entity] : records_)
    for (const auto& [entity, record] : by_entity)
      ordered[{url_raw, entity}] = record;
  for (const auto& [key, record] : ordered)
    lines.push_back(social_to_json(record));
  rewrite(file_, lines);
}

std::size_t SocialStore::size() const {
  std::shared_lock lock(mu_);
  std::size_t n = 0;
  for (const auto& [url_raw, by_entity] : records_) n += by_entity.size();
  return n;
}

PatternStore::PatternStore(const std::filesystem::path& file)
    : file_(file), persistent_(true) {
  for_each_line(file_, [this](const json& j) {
    if (auto r = pattern_from_json(j)) records_.insert_or_assign(r->url.raw, *r);
  });
}

void PatternStore::append_locked(const PatternRecord& record) {
  if (persistent_) append_line(file_, pattern_to_json(record));
}

std::optional<PatternRecord> PatternStore::get(const PageUrl& url, Timestamp now,
                                               Timestamp validity,
                                               Boundary boundary) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(url.raw);
  if (it == records_.end()) return std::nullopt;
  if (!is_fresh(it->second.pattern.created_at, now, validity, boundary))
    return std::nullopt;
  return it->second;
}

std::optional<PatternRecord> PatternStore::peek(const PageUrl& url) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(url.raw);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void PatternStore::put(const PatternRecord& record) {
  std::unique_lock lock(mu_);
  records_.insert_or_assign(record.url.raw, record);
  append_locked(record);
}

std::vector<PatternRecord> PatternStore::all() const {
  std::vector<PatternRecord> out;
  {
    std::shared_lock lock(mu_);
    for (const auto& [url_raw, record] : records_) out.push_back(record);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PatternRecord& a, const PatternRecord& b) {
                     return a.pattern.created_at > b.pattern.created_at;
                   });
  return out;
}

void PatternStore::compact() {
  std::unique_lock lock(mu_);
  if (!persistent_) return;
  std::map<std::string, PatternRecord> ordered(records_.begin(), records_.end());
  std::vector<json> lines;
  for (const auto& [url_raw, record] : ordered)
    lines.push_back(pattern_to_json(record));
  rewrite(file_, lines);
}

std::size_t PatternStore::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

}  // namespace wextract
