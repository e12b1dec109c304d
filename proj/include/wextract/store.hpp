#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wextract/pattern.hpp"
#include "wextract/rules.hpp"
#include "wextract/timestamp.hpp"
#include "wextract/url.hpp"

namespace wextract {

// Freshness window comparison. Table-style semantics are strict: a record of
// age exactly `validity` is expired. The refresh-on-success orchestrator mode
// treats the boundary as fresh.
enum class Boundary { strict, inclusive };

inline bool is_fresh(Timestamp observed, Timestamp now, Timestamp validity,
                     Boundary boundary) {
  Timestamp age = now - observed;
  return boundary == Boundary::strict ? age < validity : age <= validity;
}

// (entity, url, price, timestamp) quartet cached from a successful
// extraction. One record per (entity, url); newest wins.
struct SocialRecord {
  std::string entity;
  PageUrl url;
  CandidatePrice price;
  Timestamp observed_at = 0;
};

// One pointing pattern per url; newest wins.
struct PatternRecord {
  PageUrl url;
  PointingPattern pattern;
};

// Append-only JSON Lines file with last-record-wins compaction on load.
// Reads are shared, writes exclusive; a write is visible to subsequent reads
// in-process. Constructed without a path the store is memory-only (the
// simulator's mode).
class SocialStore {
 public:
  SocialStore() = default;
  explicit SocialStore(const std::filesystem::path& file);

  std::optional<SocialRecord> get(const PageUrl& url, Timestamp now,
                                  Timestamp validity,
                                  Boundary boundary = Boundary::strict) const;
  std::optional<SocialRecord> peek(const PageUrl& url) const;  // ignores age
  void put(const SocialRecord& record);
  std::vector<SocialRecord> find_by_site(std::string_view entity,
                                         std::string_view site) const;
  std::vector<SocialRecord> all() const;  // newest first
  void compact();
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  // url -> entity -> record
  std::unordered_map<std::string, std::map<std::string, SocialRecord>> records_;
  std::filesystem::path file_;
  bool persistent_ = false;

  void append_locked(const SocialRecord& record);
};

class PatternStore {
 public:
  PatternStore() = default;
  explicit PatternStore(const std::filesystem::path& file);

  std::optional<PatternRecord> get(const PageUrl& url, Timestamp now,
                                   Timestamp validity,
                                   Boundary boundary = Boundary::strict) const;
  std::optional<PatternRecord> peek(const PageUrl& url) const;
  void put(const PatternRecord& record);
  std::vector<PatternRecord> all() const;  // newest first
  void compact();
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, PatternRecord> records_;
  std::filesystem::path file_;
  bool persistent_ = false;

  void append_locked(const PatternRecord& record);
};

}  // namespace wextract
