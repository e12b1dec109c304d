#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wextract/orchestrator.hpp"
#include "wextract/timestamp.hpp"

namespace wextract {

struct SimConfig {
  int n_pages = 735;
  long n_requests = 50000;
  double p_success = 579.0 / 735.0;
  Timestamp social_validity = 10;
  Timestamp pattern_validity = 20;
  std::uint64_t seed = 1;
  RefreshMode refresh_mode = RefreshMode::refresh_on_success;
  std::optional<int> exact_success_count;
};

// Whether a from-scratch extraction works on this page. Fixed for the run:
// the page either parses or it does not.
struct PageProfile {
  int id_page = 0;
  bool scratch_succeeds = false;
};

struct RequestEvent {
  long time = 0;  // tick, 1-based
  int id_page = 0;
};

struct SimRecord {
  int id_page = 0;
  int code = 0;  // 0..3; pages are always available in simulation
  long time = 0;
};

struct SimResult {
  std::vector<SimRecord> records;
  std::array<long, 4> code_totals{};           // indexed by code 0..3
  std::vector<long> per_page_requests;         // index page-1
  std::vector<std::array<long, 4>> per_page_codes;
  std::vector<PageProfile> profiles;
  SimConfig config;

  long successes() const {
    return code_totals[1] + code_totals[2] + code_totals[3];
  }
  double success_rate() const {
    long n = static_cast<long>(records.size());
    return n == 0 ? 0.0 : static_cast<double>(successes()) / n;
  }
};

// Zipf(1) demand: page k is drawn i.i.d. with probability (1/k)/H(n_pages),
// by inverse-CDF over the exact normalized harmonic weights. Deterministic
// per seed. One request per tick, ticks 1..n_requests.
std::vector<RequestEvent> gen_zipf(int n_pages, long n_requests,
                                   std::uint64_t seed);

// Bernoulli(p) per page, or exactly `exact_count` success pages drawn
// uniformly without replacement.
std::vector<PageProfile> assign_success(int n_pages, double p_success,
                                        std::uint64_t seed,
                                        std::optional<int> exact_count = {});

// Runs the tier algorithm over the generated workload with in-memory stores
// and the per-page fixed from-scratch outcome. Single-threaded, deterministic.
SimResult run_sim(const SimConfig& config);

struct UpliftResult {
  double observed_rate = 0.0;
  double recomputed_rate = 0.0;  // records reclassified and recounted
  double analytic_rate = 0.0;    // observed + failed mass of selected pages
  std::vector<int> selected_pages;
  long reclassified_requests = 0;
};

// Projected success rate if the top ceil(fraction * n_pages) most requested
// pages that fail from scratch were given hand-written pointing patterns.
UpliftResult uplift_analysis(const SimResult& result, double top_fraction);

struct PageRow {
  int page = 0;
  long requests = 0;
  std::array<long, 4> codes{};
};

struct SimSummary {
  long n_requests = 0;
  long successes = 0;
  double rate = 0.0;
  std::array<long, 4> histogram{};
  std::string refresh_mode;
  std::uint64_t seed = 0;
  std::vector<PageRow> top_pages;
};

SimSummary summarize(const SimResult& result, int top_k = 10);
nlohmann::json summary_to_json(const SimSummary& summary);
std::string summary_to_text(const SimSummary& summary);

}  // namespace wextract
