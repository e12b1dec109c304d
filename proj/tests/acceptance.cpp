// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "wextract/http_lib.hpp"
#include "wextract/manifest.hpp"
#include "wextract/money.hpp"
#include "wextract/orchestrator.hpp"
#include "wextract/pattern.hpp"
#include "wextract/service.hpp"
#include "wextract/simulate.hpp"
#include "wextract/site_match.hpp"

using namespace wextract;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::vector<std::string> notes;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail = "") {
  std::printf("criterion %d  %-34s  %s%s%s\n", criterion, name.c_str(),
              pass ? "PASS" : "FAIL", detail.empty() ? "" : "  ",
              detail.c_str());
  if (!pass) ++failures;
}

std::string fixtures() { return WEXTRACT_FIXTURES_DIR; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CheckList {
  bool ok = true;
  std::string why;
  void expect(bool condition, const std::string& label) {
    if (!condition && ok) {
      ok = false;
      why = label;
    }
  }
};

// ---------------------------------------------------------------------------
// 1. Golden extraction on the bundled page holding f1 and f2 verbatim.
// ---------------------------------------------------------------------------
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  CheckList check;

  std::string page = read_file(fixtures() + "/corpus/zingerman.html");
  check.expect(page.find("<span id=\"ctl00\" class=\"price\">$ 125</span>") !=
                   std::string::npos,
               "f1 verbatim in fixture");
  check.expect(page.find("<div class=\"saving\">SAVE10%=&euro;12.80</div>") !=
                   std::string::npos,
               "f2 verbatim in fixture");

  Fetcher fetcher;
  auto rules = parse_rules("semr1|discard|contains_text|SAVE\n");
  LiveBackend backend(fetcher, default_clues(), rules);
  SocialStore social;
  PatternStore patterns;
  OrchestratorConfig config{10, 20, RefreshMode::literal};
  auto url = *PageUrl::parse("file://" + fixtures() + "/corpus/zingerman.html");
  ExtractionOutcome outcome =
      extract(url, "lemon cake", 100, config, social, patterns, backend);

  check.expect(outcome.code == SuccessCode::from_scratch, "success code 1");
  check.expect(outcome.price.has_value(), "price present");
  if (outcome.price) {
    check.expect(format_minor(outcome.price->amount_minor) == "125.00",
                 "amount exactly 125.00");
    check.expect(outcome.price->currency_code == "USD", "currency USD");
  }
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  check.expect(elapsed < 1.0, "runtime under 1 s");
  report(1, "golden extraction", check.ok, check.ok ? "" : check.why);
}

// ---------------------------------------------------------------------------
// 2. Tier state machine at ticks t, t+5, t+15 with validities 10/20.
// ---------------------------------------------------------------------------
class ScriptBackend : public Backend {
 public:
  bool is_available(const PageUrl&) override { return true; }
  std::optional<RawHtml> fetch(const PageUrl& u, Timestamp now) override {
    RawHtml html;
    html.body = "<html>x</html>";
    html.fetched_at = now;
    html.source = RawHtml::Source::local_file;
    html.final_url = u.raw;
    return html;
  }
  std::optional<CandidatePrice> apply_pattern(const RawHtml&,
                                              const PointingPattern& p) override {
    return CandidatePrice{12500, p.currency_code, kNoFragment};
  }
  ScratchExtraction from_scratch(const RawHtml&, const PageUrl& u,
                                 Timestamp now) override {
    ScratchExtraction s;
    s.price = CandidatePrice{12500, "USD", kNoFragment};
    s.pattern = PointingPattern{u, "([0-9]{2,4})", "USD", now};
    s.candidate_count = 1;
    s.fragment_count = 1;
    return s;
  }
};

std::vector<int> scripted_codes(RefreshMode mode) {
  SocialStore social;
  PatternStore patterns;
  ScriptBackend backend;
  OrchestratorConfig config{10, 20, mode};
  auto url = *PageUrl::parse("https://shop.example/scripted");
  std::vector<int> codes;
  for (Timestamp t : {1000, 1005, 1015})
    codes.push_back(static_cast<int>(
        extract(url, "", t, config, social, patterns, backend).code));
  return codes;
}

void criterion_2() {
  auto literal = scripted_codes(RefreshMode::literal);
  auto refresh = scripted_codes(RefreshMode::refresh_on_success);
  bool ok = literal == std::vector<int>{1, 3, 2} &&
            refresh == std::vector<int>{1, 3, 3};
  std::ostringstream detail;
  detail << "literal " << literal[0] << "," << literal[1] << "," << literal[2]
         << "; refresh " << refresh[0] << "," << refresh[1] << ","
         << refresh[2];
  report(2, "tier state machine", ok, detail.str());
}

// ---------------------------------------------------------------------------
// 3. Pattern round-trip, digit drift, anchor removal, on every fixture where
//    select_price succeeds.
// ---------------------------------------------------------------------------
void criterion_3() {
  CorpusManifest manifest = CorpusManifest::load(fixtures() + "/manifest.json");
  auto rules = load_rules(fixtures() + "/rules.txt");
  auto clues = load_clues(fixtures() + "/clues.txt");
  CheckList check;
  int round_trips = 0;

  for (const ManifestEntry& entry : manifest.entries) {
    std::string page = read_file(manifest.resolve(entry));
    auto fragments = extract_fragments(page, clues);
    Selection selection = select_price(fragments, rules);
    if (!selection.price) continue;
    ++round_trips;
    const Fragment& winner = fragments[selection.winner_fragment];
    PointingPattern pattern =
        derive_pattern(winner, *selection.price, entry.url, 100);

    auto again = apply_pattern(page, pattern);
    check.expect(again.has_value(), entry.url.raw + ": re-apply matched");
    if (again) {
      check.expect(again->amount_minor == selection.price->amount_minor &&
                       again->currency_code == selection.price->currency_code,
                   entry.url.raw + ": identical amount and currency");
    }

    // Integer-part drift: max(1, d-1) and d+1 digits must still match.
    auto location = locate_price(winner);
    std::size_t int_begin = winner.start_offset + location->int_begin;
    std::size_t int_len = location->int_end - location->int_begin;
    for (int len : {std::max(1, location->int_digits - 1),
                    location->int_digits + 1}) {
      std::string digits(static_cast<std::size_t>(len), '0');
      digits[0] = '8';
      for (std::size_t i = 1; i < digits.size(); ++i)
        digits[i] = static_cast<char>('0' + (i * 7 + 1) % 10);
      std::string mutated = page;
      mutated.replace(int_begin, int_len, digits);
      check.expect(apply_pattern(mutated, pattern).has_value(),
                   entry.url.raw + ": drift to " + std::to_string(len) +
                       " digits matched");
    }

    // Removing the anchor element must yield none.
    std::string removed = page;
    removed.erase(winner.start_offset, winner.end_offset - winner.start_offset);
    check.expect(!apply_pattern(removed, pattern).has_value(),
                 entry.url.raw + ": anchor removal yields none");
  }
  check.expect(round_trips == 10, "ten fixtures with a unique price");
  report(3, "pattern round-trip", check.ok,
         check.ok ? std::to_string(round_trips) + " pages" : check.why);
}

// ---------------------------------------------------------------------------
// 4. Distributional simulation: mean rate 78.8 +/- 2 over >= 20 seeds, with
//    at least one favorable draw above 84%.
// ---------------------------------------------------------------------------
SimConfig paper_config(std::uint64_t seed, RefreshMode mode) {
  SimConfig config;
  config.n_pages = 735;
  config.n_requests = 50000;
  config.p_success = 579.0 / 735.0;
  config.social_validity = 10;
  config.pattern_validity = 20;
  config.seed = seed;
  config.refresh_mode = mode;
  return config;
}

std::vector<SimResult> sim_sweep;  // seeds 1..20, reused by criteria 5 and 6

void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  double sum = 0.0;
  double best = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    sim_sweep.push_back(
        run_sim(paper_config(seed, RefreshMode::refresh_on_success)));
    double rate = sim_sweep.back().success_rate();
    sum += rate;
    best = std::max(best, rate);
  }
  double mean = sum / 20.0;
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  bool ok = std::abs(mean - 0.788) <= 0.02 && best > 0.84 && elapsed < 30.0;
  std::ostringstream detail;
  detail.precision(4);
  detail << "mean " << mean * 100 << "%, best " << best * 100 << "%, "
         << elapsed << " s";
  report(4, "simulation, distributional", ok, detail.str());
}

// ---------------------------------------------------------------------------
// 5. Table-2 shape for the most requested page, conditioned on it being a
//    success page.
// ---------------------------------------------------------------------------
void criterion_5() {
  const SimResult* chosen = nullptr;
  for (const SimResult& result : sim_sweep) {
    if (result.profiles[0].scratch_succeeds) {  // page 1 succeeds
      chosen = &result;
      break;
    }
  }
  if (!chosen) {
    report(5, "table-2 tier shape", false, "no sweep seed has page 1 succeed");
    return;
  }
  long requests = chosen->per_page_requests[0];
  const auto& codes = chosen->per_page_codes[0];
  double f1 = static_cast<double>(codes[1]) / requests;
  double f2 = static_cast<double>(codes[2]) / requests;
  double f3 = static_cast<double>(codes[3]) / requests;

  CheckList check;
  check.expect(codes[1] + codes[2] + codes[3] == requests,
               "tier counts sum to the request count");
  check.expect(codes[3] > codes[2] && codes[2] > codes[1],
               "code-3 > code-2 > code-1");
  check.expect(f1 <= 0.10, "code-1 fraction <= 10%");
  check.expect(std::abs(f1 - 0.06) <= 0.05, "code-1 within 5 points of 6%");
  check.expect(std::abs(f2 - 0.20) <= 0.05, "code-2 within 5 points of 20%");
  check.expect(std::abs(f3 - 0.74) <= 0.05, "code-3 within 5 points of 74%");

  std::ostringstream detail;
  detail.precision(3);
  detail << codes[1] << "/" << codes[2] << "/" << codes[3] << " of " << requests
         << " (" << f1 * 100 << "/" << f2 * 100 << "/" << f3 * 100 << "%)";
  report(5, "table-2 tier shape", check.ok,
         check.ok ? detail.str() : check.why);
}

// ---------------------------------------------------------------------------
// 6. Uplift identity against a direct recount, on every sweep seed.
// ---------------------------------------------------------------------------
void criterion_6() {
  CheckList check;
  for (const SimResult& result : sim_sweep) {
    UpliftResult uplift = uplift_analysis(result, 0.10);

    // Independent recount straight off the records.
    std::vector<bool> selected(result.per_page_requests.size() + 1, false);
    for (int page : uplift.selected_pages) selected[page] = true;
    long successes = 0;
    for (const SimRecord& record : result.records)
      if (record.code >= 1 || selected[record.id_page]) ++successes;
    double recount =
        static_cast<double>(successes) / result.records.size();

    check.expect(std::abs(uplift.recomputed_rate - recount) < 1e-12,
                 "recount equals recomputed rate");
    check.expect(std::abs(uplift.recomputed_rate - uplift.analytic_rate) < 1e-12,
                 "observed + failed mass identity");
  }
  report(6, "uplift identity", check.ok, check.ok ? "20 seeds" : check.why);
}

// ---------------------------------------------------------------------------
// 7. Zipf sampler frequencies against the harmonic-sum oracle.
// ---------------------------------------------------------------------------
void criterion_7() {
  const int n_pages = 735;
  const long n = 50000;
  double harmonic = 0.0;
  for (int k = 1; k <= n_pages; ++k) harmonic += 1.0 / k;

  auto events = gen_zipf(n_pages, n, 1);
  long count1 = 0;
  long count2 = 0;
  for (const RequestEvent& event : events) {
    if (event.id_page == 1) ++count1;
    if (event.id_page == 2) ++count2;
  }
  double expected1 = static_cast<double>(n) / harmonic;
  double rel1 = std::abs(count1 - expected1) / expected1;
  double ratio = static_cast<double>(count2) / count1;
  double rel2 = std::abs(ratio - 0.5) / 0.5;

  bool ok = rel1 < 0.03 && rel2 < 0.05;
  std::ostringstream detail;
  detail.precision(4);
  detail << "page1 " << count1 << " (expected " << expected1 << "), ratio "
         << ratio;
  report(7, "zipf sampler", ok, detail.str());
}

// ---------------------------------------------------------------------------
// 8. Matcher behind the HTTP service, per the worked example.
// ---------------------------------------------------------------------------
void criterion_8() {
  CheckList check;

  Fetcher fetcher;
  CorpusManifest manifest = CorpusManifest::load(fixtures() + "/manifest.json");
  install_corpus(manifest, fetcher);
  LiveBackend backend(fetcher, load_clues(fixtures() + "/clues.txt"),
                      load_rules(fixtures() + "/rules.txt"));
  SocialStore social;
  PatternStore patterns;
  PriceService service(social, patterns, backend,
                       OrchestratorConfig{3600, 86400,
                                          RefreshMode::refresh_on_success});
  int port = service.bind("127.0.0.1", 0);
  check.expect(port > 0, "service binds");
  check.expect(service.start(), "service starts");

  httplib::Client client("127.0.0.1", port);

  auto empty = client.Get("/price?entity=lemon%20cake&site=Zingerman");
  check.expect(empty && empty->status == 404 && empty->body == "{}",
               "empty store answers 404 {}");

  nlohmann::json body{
      {"url", "https://www.zingermans.com/Product.aspx?ProductID=A-ZDV"},
      {"entity", "lemon cake"}};
  auto extracted = client.Post("/extract", body.dump(), "application/json");
  check.expect(extracted && extracted->status == 200, "extract endpoint runs");
  if (extracted) {
    auto outcome = nlohmann::json::parse(extracted->body);
    check.expect(outcome["code"] == 1, "extract found the price from scratch");
  }

  auto hit = client.Get("/price?entity=lemon%20cake&site=Zingerman");
  check.expect(hit && hit->status == 200, "match answers 200");
  if (hit && hit->status == 200) {
    auto answer = nlohmann::json::parse(hit->body);
    check.expect(answer["url"] ==
                     "https://www.zingermans.com/Product.aspx?ProductID=A-ZDV",
                 "stored url returned");
    check.expect(answer["amount"] == "125.00" && answer["currency"] == "USD",
                 "the $125 pair");
  }

  auto mismatch = client.Get("/price?entity=lemon%20cake&site=amazon");
  check.expect(mismatch && mismatch->status == 404 && mismatch->body == "{}",
               "host mismatch answers 404 {}");

  service.stop();
  report(8, "matcher service", check.ok, check.ok ? "" : check.why);
}

// ---------------------------------------------------------------------------
// 9. Corpus categories end to end.
// ---------------------------------------------------------------------------
void criterion_9() {
  CorpusManifest manifest = CorpusManifest::load(fixtures() + "/manifest.json");
  CorpusReport corpus =
      run_corpus(manifest, load_clues(fixtures() + "/clues.txt"),
                 load_rules(fixtures() + "/rules.txt"));
  CheckList check;

  auto find = [&corpus](const std::string& needle) -> const CorpusEntryResult* {
    for (const CorpusEntryResult& e : corpus.entries)
      if (e.url.find(needle) != std::string::npos) return &e;
    return nullptr;
  };

  // Every page with ground truth scores exact: unique-price pages and the
  // SAVE-promo pages among them.
  check.expect(corpus.exact == 10 && corpus.miss == 0,
               "all scored pages exact");
  const CorpusEntryResult* zingerman = find("zingermans");
  check.expect(zingerman && zingerman->score == CorpusScore::exact,
               "promo SAVE page exact");
  const CorpusEntryResult* promo = find("ginger-molasses");
  check.expect(promo && promo->score == CorpusScore::exact,
               "strike + SAVE banners page exact");

  const CorpusEntryResult* duplicate = find("atticfinds.example/box");
  check.expect(duplicate && !duplicate->found && duplicate->candidate_count > 1,
               "duplicate distinct prices report ambiguity");

  const CorpusEntryResult* zero = find("gift-cards");
  check.expect(zero && !zero->found && zero->candidate_count == 0,
               "zero-candidate page reports code 0");

  const CorpusEntryResult* rescued = find("pantry-bundle");
  check.expect(rescued && rescued->score == CorpusScore::exact &&
                   rescued->recover_ran,
               "recover rule rescues the bundle page");

  report(9, "corpus categories", check.ok, check.ok ? "" : check.why);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (failures > 0) {
    std::printf("%d criterion(s) failing\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria pass\n");
  return 0;
}
