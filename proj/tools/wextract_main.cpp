#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "wextract/clues.hpp"
#include "wextract/manifest.hpp"
#include "wextract/money.hpp"
#include "wextract/orchestrator.hpp"
#include "wextract/service.hpp"
#include "wextract/simulate.hpp"
#include "wextract/store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wextract;

namespace {

struct CommonOptions {
  std::string stores_dir = "stores";
  std::string rules_path;
  std::string clues_path;
  Timestamp social_validity = 3600;
  Timestamp pattern_validity = 86400;
  std::string refresh_mode = "refresh-on-success";
  std::string corpus_manifest;
  bool paper_exact_quantifier = false;
  std::size_t max_fragment_length = 1000;
  bool no_widen = false;
  int timeout_seconds = 10;
  std::string user_agent;
  bool as_json = false;
};

void add_pipeline_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--rules", opts.rules_path, "rule file (id|phase|kind|argument)")
      ->envname("WEXTRACT_RULES");
  cmd->add_option("--clues", opts.clues_path, "clue file (symbol,CODE)")
      ->envname("WEXTRACT_CLUES");
  cmd->add_option("--corpus", opts.corpus_manifest,
                  "corpus manifest mapping urls to local files");
  cmd->add_flag("--paper-exact-quantifier", opts.paper_exact_quantifier,
                "integer quantifier {d-1,d} instead of {d-1,d+1}");
  cmd->add_option("--max-fragment-len", opts.max_fragment_length,
                  "fragment length cap in bytes");
  cmd->add_flag("--no-widen", opts.no_widen,
                "do not widen digitless fragments to their parent");
  cmd->add_option("--timeout", opts.timeout_seconds, "fetch timeout, seconds");
  cmd->add_option("--user-agent", opts.user_agent, "fetch user-agent string");
}

void add_store_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--stores", opts.stores_dir, "store directory")
      ->envname("WEXTRACT_STORES");
  cmd->add_option("--social-validity", opts.social_validity,
                  "social record freshness window");
  cmd->add_option("--pattern-validity", opts.pattern_validity,
                  "pointing pattern freshness window");
  cmd->add_option("--refresh-mode", opts.refresh_mode,
                  "literal | refresh-on-success")
      ->check(CLI::IsMember({"literal", "refresh", "refresh-on-success"}));
}

std::vector<Clue> resolve_clues(const CommonOptions& opts) {
  if (!opts.clues_path.empty()) return load_clues(opts.clues_path);
  return default_clues();
}

std::vector<Rule> resolve_rules(const CommonOptions& opts) {
  if (!opts.rules_path.empty()) return load_rules(opts.rules_path);
  return {};
}

FragmentOptions fragment_options(const CommonOptions& opts) {
  FragmentOptions fo;
  fo.max_length = opts.max_fragment_length;
  fo.widen_digitless = !opts.no_widen;
  return fo;
}

FetchOptions fetch_options(const CommonOptions& opts) {
  FetchOptions fetch_opts;
  fetch_opts.timeout_seconds = opts.timeout_seconds;
  if (!opts.user_agent.empty()) fetch_opts.user_agent = opts.user_agent;
  return fetch_opts;
}

void install_manifest(const CommonOptions& opts, Fetcher& fetcher) {
  if (!opts.corpus_manifest.empty())
    install_corpus(CorpusManifest::load(opts.corpus_manifest), fetcher);
}

OrchestratorConfig orchestrator_config(const CommonOptions& opts) {
  OrchestratorConfig config;
  config.social_validity = opts.social_validity;
  config.pattern_validity = opts.pattern_validity;
  config.refresh_mode = refresh_mode_from_string(opts.refresh_mode);
  config.validate();
  return config;
}

int run_extract(const CommonOptions& opts, const std::string& url_string,
                const std::string& entity) {
  auto url = PageUrl::parse(url_string);
  if (!url) {
    std::cerr << "error: not an absolute http/https/file url: " << url_string
              << "\n";
    return 1;
  }
  fs::create_directories(opts.stores_dir);
  SocialStore social(fs::path(opts.stores_dir) / "social.jsonl");
  PatternStore patterns(fs::path(opts.stores_dir) / "patterns.jsonl");
  Fetcher fetcher(fetch_options(opts));
  install_manifest(opts, fetcher);
  PatternOptions pattern_opts{opts.paper_exact_quantifier};
  LiveBackend backend(fetcher, resolve_clues(opts), resolve_rules(opts),
                      fragment_options(opts), pattern_opts);

  ExtractionOutcome outcome =
      extract(*url, entity, wall_clock_now(), orchestrator_config(opts), social,
              patterns, backend);

  if (opts.as_json) {
    std::cout << outcome_to_json(outcome).dump(2) << "\n";
  } else {
    std::cout << "code " << static_cast<int>(outcome.code);
    if (outcome.price)
      std::cout << "  " << format_minor(outcome.price->amount_minor) << " "
                << outcome.price->currency_code;
    std::cout << "  " << outcome.url.raw << "\n";
    for (const TierAttempt& attempt : outcome.tier_trace)
      std::cout << "  " << attempt.tier << ": "
                << (attempt.hit ? "hit" : "miss")
                << (attempt.reason.empty() ? "" : " (" + attempt.reason + ")")
                << "\n";
  }
  switch (outcome.code) {
    case SuccessCode::not_found:
      return 2;
    case SuccessCode::unavailable:
      return 3;
    default:
      return 0;
  }
}

int run_corpus_cmd(const CommonOptions& opts, const std::string& manifest_path,
                   int jobs) {
  CorpusManifest manifest = CorpusManifest::load(manifest_path);
  CorpusReport report = run_corpus(manifest, resolve_clues(opts),
                                   resolve_rules(opts), fragment_options(opts),
                                   jobs);
  if (opts.as_json)
    std::cout << report_to_json(report).dump(2) << "\n";
  else
    std::cout << report_to_text(report);
  return 0;
}

int run_serve(const CommonOptions& opts, const std::string& bind, int port) {
  fs::create_directories(opts.stores_dir);
  SocialStore social(fs::path(opts.stores_dir) / "social.jsonl");
  PatternStore patterns(fs::path(opts.stores_dir) / "patterns.jsonl");
  Fetcher fetcher(fetch_options(opts));
  install_manifest(opts, fetcher);
  PatternOptions pattern_opts{opts.paper_exact_quantifier};
  LiveBackend backend(fetcher, resolve_clues(opts), resolve_rules(opts),
                      fragment_options(opts), pattern_opts);
  PriceService service(social, patterns, backend, orchestrator_config(opts));
  int bound = service.bind(bind, port);
  if (bound <= 0) {
    std::cerr << "error: cannot bind " << bind << ":" << port << "\n";
    return 1;
  }
  std::cout << "listening on " << bind << ":" << bound << "\n" << std::flush;
  service.run();
  return 0;
}

double parse_probability(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    double num = std::stod(s.substr(0, slash));
    double den = std::stod(s.substr(slash + 1));
    if (den <= 0)
      throw std::invalid_argument("--p: denominator must be positive");
    return num / den;
  }
  return std::stod(s);
}

int run_simulate(const CommonOptions& opts, const SimConfig& base,
                 const std::string& p_string, int exact_successes,
                 double uplift_fraction, const std::string& records_path,
                 int top_k) {
  SimConfig config = base;
  config.social_validity = opts.social_validity;
  config.pattern_validity = opts.pattern_validity;
  config.refresh_mode = refresh_mode_from_string(opts.refresh_mode);
  config.p_success = parse_probability(p_string);
  if (config.p_success < 0.0 || config.p_success > 1.0)
    throw std::invalid_argument("--p: probability must be within [0,1]");
  if (exact_successes >= 0) config.exact_success_count = exact_successes;

  SimResult result = run_sim(config);

  if (!records_path.empty()) {
    std::ofstream out(records_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot write " << records_path << "\n";
      return 1;
    }
    for (const SimRecord& r : result.records)
      out << json{{"id_page", r.id_page}, {"success", r.code}, {"time", r.time}}
                 .dump()
          << "\n";
  }

  SimSummary summary = summarize(result, top_k);
  json doc = summary_to_json(summary);
  if (uplift_fraction > 0.0) {
    UpliftResult uplift = uplift_analysis(result, uplift_fraction);
    doc["uplift"] = {{"fraction", uplift_fraction},
                     {"observed_rate", uplift.observed_rate},
                     {"projected_rate", uplift.recomputed_rate},
                     {"analytic_rate", uplift.analytic_rate},
                     {"pages", uplift.selected_pages},
                     {"reclassified_requests", uplift.reclassified_requests}};
  }
  if (opts.as_json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << summary_to_text(summary);
    if (doc.contains("uplift"))
      std::cout << "uplift " << uplift_fraction << ": rate "
                << doc["uplift"]["observed_rate"].get<double>() << " -> "
                << doc["uplift"]["projected_rate"].get<double>() << "\n";
  }
  return 0;
}

int run_store(const CommonOptions& opts, const std::string& action,
              const std::string& which) {
  fs::path dir = opts.stores_dir;
  bool with_social = which == "social" || which == "all";
  bool with_patterns = which == "patterns" || which == "all";
  if (action == "list") {
    json out = json::object();
    if (with_social) {
      SocialStore social(dir / "social.jsonl");
      json records = json::array();
      for (const SocialRecord& r : social.all())
        records.push_back({{"entity", r.entity},
                           {"url", r.url.raw},
                           {"amount", format_minor(r.price.amount_minor)},
                           {"currency", r.price.currency_code},
                           {"observed_at", r.observed_at}});
      out["social"] = records;
    }
    if (with_patterns) {
      PatternStore patterns(dir / "patterns.jsonl");
      json records = json::array();
      for (const PatternRecord& r : patterns.all())
        records.push_back({{"url", r.url.raw},
                           {"regex_source", r.pattern.regex_source},
                           {"currency", r.pattern.currency_code},
                           {"created_at", r.pattern.created_at}});
      out["patterns"] = records;
    }
    if (opts.as_json) {
      std::cout << out.dump(2) << "\n";
    } else {
      for (auto& [store_name, records] : out.items()) {
        std::cout << store_name << " (" << records.size() << ")\n";
        for (const auto& r : records) std::cout << "  " << r.dump() << "\n";
      }
    }
    return 0;
  }
  if (with_social && fs::exists(dir / "social.jsonl")) {
    SocialStore social(dir / "social.jsonl");
    social.compact();
  }
  if (with_patterns && fs::exists(dir / "patterns.jsonl")) {
    PatternStore patterns(dir / "patterns.jsonl");
    patterns.compact();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wextract: browserless product-price extraction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read defaults from a config file");

  CommonOptions opts;

  std::string url_string;
  std::string entity;
  auto* cmd_extract =
      app.add_subcommand("extract", "tiered price extraction for one url");
  cmd_extract->add_option("url", url_string, "page url (http, https or file)")
      ->required();
  cmd_extract->add_option("--entity", entity, "entity label for the social store");
  cmd_extract->add_flag("--json", opts.as_json, "machine-readable output");
  add_store_flags(cmd_extract, opts);
  add_pipeline_flags(cmd_extract, opts);

  std::string manifest_path;
  int jobs = 1;
  auto* cmd_corpus =
      app.add_subcommand("corpus", "from-scratch extraction over a manifest");
  cmd_corpus->add_option("manifest", manifest_path, "corpus manifest (JSON)")
      ->required();
  cmd_corpus->add_option("--jobs", jobs, "parallel workers")
      ->check(CLI::PositiveNumber);
  cmd_corpus->add_flag("--json", opts.as_json, "machine-readable output");
  add_pipeline_flags(cmd_corpus, opts);

  std::string bind = "127.0.0.1";
  int port = 8080;
  auto* cmd_serve = app.add_subcommand("serve", "price query service");
  cmd_serve->add_option("--bind", bind, "bind address");
  cmd_serve->add_option("--port", port, "port (0 picks a free one)");
  add_store_flags(cmd_serve, opts);
  add_pipeline_flags(cmd_serve, opts);

  SimConfig sim;
  std::string p_string = "579/735";
  int exact_successes = -1;
  double uplift_fraction = 0.0;
  std::string records_path;
  int top_k = 10;
  auto* cmd_simulate =
      app.add_subcommand("simulate", "zipf-demand cache simulation");
  cmd_simulate->add_option("--pages", sim.n_pages, "page count")
      ->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--requests", sim.n_requests, "request count");
  cmd_simulate->add_option("--p", p_string,
                           "from-scratch success probability (a/b or decimal)");
  cmd_simulate->add_option("--seed", sim.seed, "rng seed");
  cmd_simulate->add_option("--exact-successes", exact_successes,
                           "draw exactly this many success pages");
  cmd_simulate->add_option("--uplift", uplift_fraction,
                           "project manual patterns for this top fraction");
  cmd_simulate->add_option("--records", records_path,
                           "write one JSON line per request here");
  cmd_simulate->add_option("--top", top_k, "rows in the per-page table");
  cmd_simulate->add_flag("--json", opts.as_json, "machine-readable output");
  CommonOptions sim_opts;
  sim_opts.social_validity = 10;  // ticks, not seconds
  sim_opts.pattern_validity = 20;
  add_store_flags(cmd_simulate, sim_opts);

  std::string store_action;
  std::string which_store = "all";
  auto* cmd_store = app.add_subcommand("store", "inspect or compact the stores");
  cmd_store->add_option("action", store_action, "list | compact")
      ->required()
      ->check(CLI::IsMember({"list", "compact"}));
  cmd_store->add_option("--store", which_store, "social | patterns | all")
      ->check(CLI::IsMember({"social", "patterns", "all"}));
  cmd_store->add_flag("--json", opts.as_json, "machine-readable output");
  add_store_flags(cmd_store, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // flag errors are exit 1
  }

  try {
    if (cmd_extract->parsed()) return run_extract(opts, url_string, entity);
    if (cmd_corpus->parsed()) return run_corpus_cmd(opts, manifest_path, jobs);
    if (cmd_serve->parsed()) return run_serve(opts, bind, port);
    if (cmd_simulate->parsed()) {
      sim_opts.as_json = opts.as_json;
      return run_simulate(sim_opts, sim, p_string, exact_successes,
                          uplift_fraction, records_path, top_k);
    }
    if (cmd_store->parsed()) return run_store(opts, store_action, which_store);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
