#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wextract/rules.hpp"
#include "wextract/timestamp.hpp"
#include "wextract/url.hpp"

namespace wextract {

class SocialStore;

// The (entity, site) tuple a language model pulls out of a user's question.
struct SiteQuery {
  std::string entity;
  std::string site;
};

// Resolution from the social store: all fields present or all absent.
struct MatchAnswer {
  std::optional<PageUrl> url;
  std::optional<CandidatePrice> price;
  std::optional<Timestamp> observed_at;

  bool empty() const { return !url.has_value(); }
};

// Lowercase, scheme / leading "www." / path / port stripped. Idempotent.
std::string normalize_site(std::string_view site);

// Every normalized site label must prefix-match some host label, so that
// "Zingerman" finds host "www.zingermans.com".
bool site_matches_host(std::string_view normalized_site, std::string_view host);

// Case-insensitive AND-of-tokens containment of the query entity in the
// stored entity.
bool entity_matches(std::string_view query_entity, std::string_view stored_entity);

// Newest matching record wins; empty answer when nothing matches.
MatchAnswer match(const SiteQuery& query, const SocialStore& store);

// The full newest-first match list (the service's all=1 view).
std::vector<MatchAnswer> match_all(const SiteQuery& query,
                                   const SocialStore& store);

}  // namespace wextract
