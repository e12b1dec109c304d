#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wextract/simulate.hpp"

using namespace wextract;

TEST_CASE("degenerate zipf: one page gets every request") {
  auto events = gen_zipf(1, 50, 7);
  REQUIRE(events.size() == 50);
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].id_page == 1);
    CHECK(events[i].time == static_cast<long>(i) + 1);
  }
}

TEST_CASE("two pages split 2:1") {
  auto events = gen_zipf(2, 30000, 3);
  long page1 = std::count_if(events.begin(), events.end(),
                             [](const RequestEvent& e) { return e.id_page == 1; });
  double share = static_cast<double>(page1) / 30000.0;
  CHECK(share == doctest::Approx(2.0 / 3.0).epsilon(0.02));
}

TEST_CASE("zipf sampling is deterministic per seed") {
  auto a = gen_zipf(100, 2000, 42);
  auto b = gen_zipf(100, 2000, 42);
  auto c = gen_zipf(100, 2000, 43);
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    same = same && a[i].id_page == b[i].id_page;
  CHECK(same);
  bool differs = false;
  for (std::size_t i = 0; i < c.size(); ++i)
    differs = differs || a[i].id_page != c[i].id_page;
  CHECK(differs);
}

TEST_CASE("page-1 frequency tracks 1/H(n)") {
  const int n_pages = 735;
  const long n = 50000;
  double harmonic = 0.0;
  for (int k = 1; k <= n_pages; ++k) harmonic += 1.0 / k;
  auto events = gen_zipf(n_pages, n, 1);
  long page1 = std::count_if(events.begin(), events.end(),
                             [](const RequestEvent& e) { return e.id_page == 1; });
  double expected = static_cast<double>(n) / harmonic;  // about 6967
  CHECK(std::abs(page1 - expected) / expected < 0.03);
}

TEST_CASE("success assignment: bernoulli corners and the exact-count draw") {
  auto all = assign_success(50, 1.0, 9);
  CHECK(std::all_of(all.begin(), all.end(),
                    [](const PageProfile& p) { return p.scratch_succeeds; }));
  auto none = assign_success(50, 0.0, 9);
  CHECK(std::none_of(none.begin(), none.end(),
                     [](const PageProfile& p) { return p.scratch_succeeds; }));

  auto exact = assign_success(735, 0.5, 11, 579);
  long successes = std::count_if(exact.begin(), exact.end(),
                                 [](const PageProfile& p) { return p.scratch_succeeds; });
  CHECK(successes == 579);

  auto exact2 = assign_success(735, 0.5, 11, 579);
  bool same = true;
  for (std::size_t i = 0; i < exact.size(); ++i)
    same = same && exact[i].scratch_succeeds == exact2[i].scratch_succeeds;
  CHECK(same);
}

TEST_CASE("single always-successful page under refresh mode: one scratch") {
  SimConfig config;
  config.n_pages = 1;
  config.n_requests = 200;
  config.p_success = 1.0;
  config.seed = 5;
  config.refresh_mode = RefreshMode::refresh_on_success;
  SimResult result = run_sim(config);
  // Requests arrive every tick; everything after the first is a social hit.
  CHECK(result.code_totals[1] == 1);
  CHECK(result.code_totals[3] == 199);
  CHECK(result.code_totals[0] == 0);
  CHECK(result.code_totals[2] == 0);
}

TEST_CASE("single page, literal mode: the closed-form 20-tick cycle") {
  SimConfig config;
  config.n_pages = 1;
  config.n_requests = 200;
  config.p_success = 1.0;
  config.seed = 5;
  config.refresh_mode = RefreshMode::literal;
  SimResult result = run_sim(config);
  for (const SimRecord& r : result.records) {
    long phase = (r.time - 1) % 20;
    int expected = phase == 0 ? 1 : (phase <= 9 ? 3 : 2);
    CHECK(r.code == expected);
  }
}

TEST_CASE("conservation: codes sum to requests, per page and overall") {
  SimConfig config;
  config.n_pages = 50;
  config.n_requests = 5000;
  config.seed = 21;
  SimResult result = run_sim(config);
  long total = std::accumulate(result.code_totals.begin(),
                               result.code_totals.end(), 0L);
  CHECK(total == config.n_requests);
  for (int page = 1; page <= config.n_pages; ++page) {
    long sum = 0;
    for (long c : result.per_page_codes[page - 1]) sum += c;
    CHECK(sum == result.per_page_requests[page - 1]);
  }
}

TEST_CASE("failure pages never produce a success code") {
  SimConfig config;
  config.n_pages = 30;
  config.n_requests = 4000;
  config.p_success = 0.5;
  config.seed = 13;
  SimResult result = run_sim(config);
  for (const SimRecord& r : result.records) {
    if (!result.profiles[r.id_page - 1].scratch_succeeds) CHECK(r.code == 0);
  }
  SUBCASE("p = 0 means every request fails") {
    config.p_success = 0.0;
    SimResult all_fail = run_sim(config);
    CHECK(all_fail.code_totals[0] == config.n_requests);
  }
}

TEST_CASE("runs are deterministic per config and seed") {
  SimConfig config;
  config.n_pages = 40;
  config.n_requests = 3000;
  config.seed = 17;
  SimResult a = run_sim(config);
  SimResult b = run_sim(config);
  REQUIRE(a.records.size() == b.records.size());
  bool same = true;
  for (std::size_t i = 0; i < a.records.size(); ++i)
    same = same && a.records[i].code == b.records[i].code &&
           a.records[i].id_page == b.records[i].id_page;
  CHECK(same);
}

TEST_CASE("uplift: recount equals observed plus the failed mass") {
  SimConfig config;
  config.n_pages = 100;
  config.n_requests = 8000;
  config.p_success = 0.6;
  config.seed = 23;
  SimResult result = run_sim(config);
  UpliftResult uplift = uplift_analysis(result, 0.10);

  CHECK(uplift.recomputed_rate == doctest::Approx(uplift.analytic_rate).epsilon(1e-12));
  CHECK(uplift.recomputed_rate >= uplift.observed_rate);

  // Direct recount oracle over the records.
  long successes = 0;
  for (const SimRecord& r : result.records) {
    bool selected = std::find(uplift.selected_pages.begin(),
                              uplift.selected_pages.end(),
                              r.id_page) != uplift.selected_pages.end();
    if (r.code >= 1 || selected) ++successes;
  }
  CHECK(uplift.recomputed_rate ==
        doctest::Approx(static_cast<double>(successes) / 8000.0).epsilon(1e-12));

  SUBCASE("zero fraction changes nothing") {
    UpliftResult zero = uplift_analysis(result, 0.0);
    CHECK(zero.recomputed_rate == doctest::Approx(zero.observed_rate));
    CHECK(zero.selected_pages.empty());
  }
  SUBCASE("all pages already successful changes nothing") {
    config.p_success = 1.0;
    SimResult perfect = run_sim(config);
    UpliftResult u = uplift_analysis(perfect, 0.10);
    CHECK(u.recomputed_rate == doctest::Approx(u.observed_rate));
    CHECK(u.reclassified_requests == 0);
  }
}

TEST_CASE("report arithmetic") {
  SimResult result;
  result.config.seed = 1;
  result.per_page_requests.assign(2, 0);
  result.per_page_codes.assign(2, {});
  int codes[] = {1, 3, 3, 0};
  long t = 1;
  for (int c : codes) {
    result.records.push_back({1, c, t++});
    result.code_totals[c] += 1;
    result.per_page_requests[0] += 1;
    result.per_page_codes[0][c] += 1;
  }
  SimSummary summary = summarize(result);
  CHECK(summary.rate == doctest::Approx(0.75));
  CHECK(summary.histogram[0] == 1);
  CHECK(summary.histogram[1] == 1);
  CHECK(summary.histogram[3] == 2);
  REQUIRE(summary.top_pages.size() == 1);
  CHECK(summary.top_pages[0].requests == 4);

  SUBCASE("empty run is all zeroes") {
    SimResult empty;
    SimSummary s = summarize(empty);
    CHECK(s.n_requests == 0);
    CHECK(s.rate == 0.0);
    CHECK(s.top_pages.empty());
  }
}
