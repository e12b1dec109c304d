#include "wextract/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>

namespace wextract {

namespace {

// 53-bit uniform in [0,1); keeps draws identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t kSuccessSeedSalt = 0x9E3779B97F4A7C15ULL;

// Simulation backend: pages are always available, HTML is a stand-in, and
// from-scratch succeeds per the fixed page profile.
class SimBackend : public Backend {
 public:
  SimBackend(const std::vector<PageProfile>& profiles) : profiles_(profiles) {}

  bool is_available(const PageUrl&) override { return true; }

  std::optional<RawHtml> fetch(const PageUrl& url, Timestamp now) override {
    RawHtml html;
    html.body = "<html></html>";
    html.fetched_at = now;
    html.source = RawHtml::Source::local_file;
    html.final_url = url.raw;
    return html;
  }

  std::optional<CandidatePrice> apply_pattern(const RawHtml&,
                                              const PointingPattern& p) override {
    return CandidatePrice{100, p.currency_code, kNoFragment};
  }

  ScratchExtraction from_scratch(const RawHtml&, const PageUrl& url,
                                 Timestamp now) override {
    int page = page_of(url);
    ScratchExtraction result;
    if (page >= 1 && profiles_[page - 1].scratch_succeeds) {
      result.price = CandidatePrice{100, "USD", kNoFragment};
      result.pattern = PointingPattern{url, "([0-9]{1,9})", "USD", now};
      result.candidate_count = 1;
      result.fragment_count = 1;
    }
    return result;
  }

  static int page_of(const PageUrl& url) {
    auto slash = url.path.rfind('/');
    if (slash == std::string::npos) return 0;
    return std::atoi(url.path.c_str() + slash + 1);
  }

 private:
  const std::vector<PageProfile>& profiles_;
};

}  // namespace

std::vector<RequestEvent> gen_zipf(int n_pages, long n_requests,
                                   std::uint64_t seed) {
  std::vector<double> cumulative(n_pages);
  double total = 0.0;
  for (int k = 1; k <= n_pages; ++k) {
    total += 1.0 / k;
    cumulative[k - 1] = total;
  }
  for (double& c : cumulative) c /= total;
  cumulative[n_pages - 1] = 1.0;  // guard against rounding

  std::mt19937_64 rng(seed);
  std::vector<RequestEvent> events;
  events.reserve(static_cast<std::size_t>(std::max(n_requests, 0L)));
  for (long t = 1; t <= n_requests; ++t) {
    double u = uniform01(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    int page = static_cast<int>(it - cumulative.begin()) + 1;
    events.push_back({t, std::min(page, n_pages)});
  }
  return events;
}

std::vector<PageProfile> assign_success(int n_pages, double p_success,
                                        std::uint64_t seed,
                                        std::optional<int> exact_count) {
  std::mt19937_64 rng(seed ^ kSuccessSeedSalt);
  std::vector<PageProfile> profiles(n_pages);
  for (int k = 1; k <= n_pages; ++k) profiles[k - 1] = {k, false};

  if (exact_count) {
    int want = std::clamp(*exact_count, 0, n_pages);
    std::vector<int> ids(n_pages);
    std::iota(ids.begin(), ids.end(), 1);
    // Partial Fisher-Yates: the first `want` entries are the success pages.
    // Bounded draws are hand-rolled so runs replay across standard libraries.
    for (int i = 0; i < want; ++i) {
      std::uint64_t span = static_cast<std::uint64_t>(n_pages - i);
      int j = i + static_cast<int>(rng() % span);
      std::swap(ids[i], ids[j]);
      profiles[ids[i] - 1].scratch_succeeds = true;
    }
  } else {
    for (int k = 0; k < n_pages; ++k)
      profiles[k].scratch_succeeds = uniform01(rng) < p_success;
  }
  return profiles;
}

SimResult run_sim(const SimConfig& config) {
  OrchestratorConfig orch;
  orch.social_validity = config.social_validity;
  orch.pattern_validity = config.pattern_validity;
  orch.refresh_mode = config.refresh_mode;
  orch.validate();

  SimResult result;
  result.config = config;
  result.profiles =
      assign_success(config.n_pages, config.p_success, config.seed,
                     config.exact_success_count);
  result.per_page_requests.assign(config.n_pages, 0);
  result.per_page_codes.assign(config.n_pages, {});

  std::vector<PageUrl> urls;
  urls.reserve(config.n_pages);
  for (int k = 1; k <= config.n_pages; ++k)
    urls.push_back(*PageUrl::parse("http://sim.local/page/" + std::to_string(k)));

  SocialStore social;
  PatternStore patterns;
  SimBackend backend(result.profiles);

  std::vector<RequestEvent> events =
      gen_zipf(config.n_pages, config.n_requests, config.seed);
  result.records.reserve(events.size());
  for (const RequestEvent& event : events) {
    ExtractionOutcome outcome =
        extract(urls[event.id_page - 1], "", event.time, orch, social, patterns,
                backend);
    int code = static_cast<int>(outcome.code);
    result.records.push_back({event.id_page, code, event.time});
    result.code_totals[code] += 1;
    result.per_page_requests[event.id_page - 1] += 1;
    result.per_page_codes[event.id_page - 1][code] += 1;
  }
  return result;
}

UpliftResult uplift_analysis(const SimResult& result, double top_fraction) {
  UpliftResult uplift;
  uplift.observed_rate = result.success_rate();
  uplift.recomputed_rate = uplift.observed_rate;
  uplift.analytic_rate = uplift.observed_rate;

  long n = static_cast<long>(result.records.size());
  if (n == 0 || top_fraction <= 0.0) return uplift;

  int n_pages = static_cast<int>(result.per_page_requests.size());
  int top_k = static_cast<int>(
      std::ceil(top_fraction * static_cast<double>(n_pages)));
  top_k = std::min(top_k, n_pages);

  // Most requested pages first; page id breaks ties.
  std::vector<int> order(n_pages);
  std::iota(order.begin(), order.end(), 1);
  std::sort(order.begin(), order.end(), [&result](int a, int b) {
    long ra = result.per_page_requests[a - 1];
    long rb = result.per_page_requests[b - 1];
    return ra != rb ? ra > rb : a < b;
  });

  std::vector<bool> selected(n_pages + 1, false);
  for (int i = 0; i < top_k; ++i) {
    int page = order[i];
    if (!result.profiles[page - 1].scratch_succeeds) {
      selected[page] = true;
      uplift.selected_pages.push_back(page);
    }
  }

  long successes = 0;
  for (const SimRecord& record : result.records) {
    bool success = record.code >= 1;
    if (selected[record.id_page] && !success) {
      success = true;
      ++uplift.reclassified_requests;
    }
    if (success) ++successes;
  }
  uplift.recomputed_rate = static_cast<double>(successes) / n;
  uplift.analytic_rate = uplift.observed_rate +
                         static_cast<double>(uplift.reclassified_requests) / n;
  return uplift;
}

SimSummary summarize(const SimResult& result, int top_k) {
  SimSummary summary;
  summary.n_requests = static_cast<long>(result.records.size());
  summary.successes = result.successes();
  summary.rate = result.success_rate();
  summary.histogram = result.code_totals;
  summary.refresh_mode = to_string(result.config.refresh_mode);
  summary.seed = result.config.seed;

  int n_pages = static_cast<int>(result.per_page_requests.size());
  std::vector<int> order(n_pages);
  std::iota(order.begin(), order.end(), 1);
  std::sort(order.begin(), order.end(), [&result](int a, int b) {
    long ra = result.per_page_requests[a - 1];
    long rb = result.per_page_requests[b - 1];
    return ra != rb ? ra > rb : a < b;
  });
  for (int i = 0; i < std::min(top_k, n_pages); ++i) {
    int page = order[i];
    if (result.per_page_requests[page - 1] == 0) break;
    summary.top_pages.push_back({page, result.per_page_requests[page - 1],
                                 result.per_page_codes[page - 1]});
  }
  return summary;
}

nlohmann::json summary_to_json(const SimSummary& summary) {
  nlohmann::json pages = nlohmann::json::array();
  for (const PageRow& row : summary.top_pages) {
    pages.push_back({{"page", row.page},
                     {"requests", row.requests},
                     {"success_0", row.codes[0]},
                     {"success_1", row.codes[1]},
                     {"success_2", row.codes[2]},
                     {"success_3", row.codes[3]}});
  }
  return nlohmann::json{
      {"n_requests", summary.n_requests},
      {"successes", summary.successes},
      {"success_rate", summary.rate},
      {"histogram",
       {{"0", summary.histogram[0]},
        {"1", summary.histogram[1]},
        {"2", summary.histogram[2]},
        {"3", summary.histogram[3]}}},
      {"refresh_mode", summary.refresh_mode},
      {"seed", summary.seed},
      {"top_pages", pages},
  };
}

std::string summary_to_text(const SimSummary& summary) {
  std::ostringstream out;
  out << "requests: " << summary.n_requests << "\n";
  out << "successes: " << summary.successes << " ("
      << static_cast<double>(static_cast<long>(summary.rate * 10000)) / 100.0
      << "%)\n";
  out << "refresh mode: " << summary.refresh_mode << ", seed: " << summary.seed
      << "\n";
  out << "code histogram: 0=" << summary.histogram[0]
      << " 1=" << summary.histogram[1] << " 2=" << summary.histogram[2]
      << " 3=" << summary.histogram[3] << "\n";
  if (!summary.top_pages.empty()) {
    out << "page  requests  success=1  success=2  success=3  success=0\n";
    for (const PageRow& row : summary.top_pages) {
      out << row.page << "  " << row.requests << "  " << row.codes[1] << "  "
          << row.codes[2] << "  " << row.codes[3] << "  " << row.codes[0]
          << "\n";
    }
  }
  return out.str();
}

}  // namespace wextract
