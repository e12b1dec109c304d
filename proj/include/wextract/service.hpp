#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <json.hpp>

#include "wextract/orchestrator.hpp"
#include "wextract/store.hpp"

namespace wextract {

nlohmann::json outcome_to_json(const ExtractionOutcome& outcome);

// The query endpoint in front of the social store plus an extraction
// endpoint:
//   GET  /price?entity=<e>&site=<s>[&all=1]  -> 200 match | 404 {}
//   POST /extract {"url": ..., "entity": ...} -> extraction outcome record
class PriceService {
 public:
  PriceService(SocialStore& social, PatternStore& patterns, Backend& backend,
               OrchestratorConfig config,
               std::function<Timestamp()> clock = wall_clock_now);
  ~PriceService();

  // Binds and returns the port (resolves port 0), or -1 on failure.
  int bind(const std::string& host, int port);
  void run();    // blocking listen; call after bind()
  bool start();  // listen on a background thread; for tests
  void stop();

 private:
  SocialStore& social_;
  PatternStore& patterns_;
  Backend& backend_;
  OrchestratorConfig config_;
  std::function<Timestamp()> clock_;
  // Calls for the same url are serialized; distinct urls proceed in parallel.
  std::array<std::mutex, 64> url_stripes_;

  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;

  void install_routes();
};

}  // namespace wextract
