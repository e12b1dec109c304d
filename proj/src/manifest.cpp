#include "wextract/manifest.hpp"

#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "wextract/fetch.hpp"
#include "wextract/money.hpp"

namespace wextract {

namespace {

using nlohmann::json;

std::optional<std::int64_t> amount_field(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const json& v = j.at(key);
  if (v.is_string()) {
    auto minor = decimal_to_minor(v.get<std::string>());
    if (!minor) throw std::runtime_error(std::string("bad ") + key + ": " +
                                         v.get<std::string>());
    return minor;
  }
  if (v.is_number_integer()) return v.get<std::int64_t>() * 100;
  if (v.is_number_float()) {
    double d = v.get<double>();
    return static_cast<std::int64_t>(d * 100.0 + (d >= 0 ? 0.5 : -0.5));
  }
  throw std::runtime_error(std::string("bad ") + key);
}

}  // namespace

CorpusManifest CorpusManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  json doc = json::parse(in, nullptr, true);
  if (!doc.is_object() || !doc.contains("entries") ||
      !doc.at("entries").is_array())
    throw std::runtime_error("manifest must be an object with an 'entries' array");

  CorpusManifest manifest;
  manifest.root = path.parent_path();
  std::unordered_set<std::string> seen_urls;
  for (const json& e : doc.at("entries")) {
    ManifestEntry entry;
    auto url = PageUrl::parse(e.value("url", ""));
    if (!url) throw std::runtime_error("manifest entry has a bad url");
    entry.url = *url;
    if (!seen_urls.insert(entry.url.raw).second)
      throw std::runtime_error("duplicate manifest url: " + entry.url.raw);
    std::string local = e.value("local_path", "");
    if (local.empty())
      throw std::runtime_error("manifest entry missing local_path: " +
                               entry.url.raw);
    entry.local_path = local;
    if (!std::filesystem::exists(manifest.root / entry.local_path))
      throw std::runtime_error("manifest path does not exist: " +
                               (manifest.root / entry.local_path).string());
    entry.expected_minor = amount_field(e, "expected_amount");
    if (e.contains("expected_currency"))
      entry.expected_currency = e.value("expected_currency", "");
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

void install_corpus(const CorpusManifest& manifest, Fetcher& fetcher) {
  for (const ManifestEntry& entry : manifest.entries)
    fetcher.map_url(entry.url.raw, manifest.resolve(entry));
}

namespace {

CorpusEntryResult run_entry(const CorpusManifest& manifest,
                            const ManifestEntry& entry,
                            const std::vector<Clue>& clues,
                            const std::vector<Rule>& rules,
                            const FragmentOptions& fragment_options) {
  CorpusEntryResult result;
  result.url = entry.url.raw;

  std::ifstream in(manifest.resolve(entry), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string body = buf.str();

  std::vector<Fragment> fragments =
      extract_fragments(body, clues, fragment_options);
  Selection selection = select_price(fragments, rules);
  result.fragment_count = fragments.size();
  result.candidate_count = selection.candidate_count;
  result.recover_ran = selection.recover_ran;
  if (selection.price) {
    result.found = true;
    result.amount_minor = selection.price->amount_minor;
    result.currency = selection.price->currency_code;
  }

  if (entry.expected_minor) {
    bool amount_ok = result.found && result.amount_minor == *entry.expected_minor;
    bool currency_ok = !entry.expected_currency ||
                       (result.found && result.currency == *entry.expected_currency);
    result.score = amount_ok && currency_ok ? CorpusScore::exact : CorpusScore::miss;
  } else {
    result.score = CorpusScore::unscored;
  }
  return result;
}

}  // namespace

CorpusReport run_corpus(const CorpusManifest& manifest,
                        const std::vector<Clue>& clues,
                        const std::vector<Rule>& rules,
                        const FragmentOptions& fragment_options, int jobs) {
  CorpusReport report;
  report.entries.resize(manifest.entries.size());

  if (jobs <= 1) {
    for (std::size_t i = 0; i < manifest.entries.size(); ++i)
      report.entries[i] =
          run_entry(manifest, manifest.entries[i], clues, rules, fragment_options);
  } else {
    std::vector<std::future<CorpusEntryResult>> futures;
    futures.reserve(manifest.entries.size());
    // Bounded fan-out: at most `jobs` entries in flight.
    std::size_t next = 0;
    while (next < manifest.entries.size() || !futures.empty()) {
      while (next < manifest.entries.size() &&
             futures.size() < static_cast<std::size_t>(jobs)) {
        futures.push_back(std::async(std::launch::async, [&, next]() {
          return run_entry(manifest, manifest.entries[next], clues, rules,
                           fragment_options);
        }));
        ++next;
      }
      std::size_t done = next - futures.size();
      report.entries[done] = futures.front().get();
      futures.erase(futures.begin());
    }
  }

  for (const CorpusEntryResult& r : report.entries) {
    if (r.score == CorpusScore::exact) ++report.exact;
    if (r.score == CorpusScore::miss) ++report.miss;
    if (r.score == CorpusScore::unscored) ++report.unscored;
    if (r.candidate_count > 1) ++report.ambiguous;
  }
  return report;
}

nlohmann::json report_to_json(const CorpusReport& report) {
  json entries = json::array();
  for (const CorpusEntryResult& r : report.entries) {
    json e{{"url", r.url},
           {"found", r.found},
           {"candidate_count", r.candidate_count},
           {"fragment_count", r.fragment_count},
           {"recover_ran", r.recover_ran},
           {"score", r.score == CorpusScore::exact    ? "exact"
                     : r.score == CorpusScore::miss   ? "miss"
                                                      : "unscored"}};
    if (r.found) {
      e["amount"] = format_minor(r.amount_minor);
      e["amount_minor"] = r.amount_minor;
      e["currency"] = r.currency;
    }
    entries.push_back(std::move(e));
  }
  return json{{"entries", entries},
              {"exact", report.exact},
              {"miss", report.miss},
              {"ambiguous", report.ambiguous},
              {"unscored", report.unscored}};
}

std::string report_to_text(const CorpusReport& report) {
  std::ostringstream out;
  for (const CorpusEntryResult& r : report.entries) {
    out << (r.score == CorpusScore::exact    ? "exact   "
            : r.score == CorpusScore::miss   ? "miss    "
                                             : "unscored")
        << "  " << r.url << "  ";
    if (r.found)
      out << format_minor(r.amount_minor) << " " << r.currency;
    else
      out << "(no price, candidates=" << r.candidate_count << ")";
    out << "  fragments=" << r.fragment_count;
    if (r.recover_ran) out << "  recover";
    out << "\n";
  }
  out << "exact=" << report.exact << " miss=" << report.miss
      << " ambiguous=" << report.ambiguous << " unscored=" << report.unscored
      << "\n";
  return out.str();
}

}  // namespace wextract
