#include "wextract/service.hpp"

#include <chrono>
#include <functional>

#include "wextract/http_lib.hpp"
#include "wextract/money.hpp"
#include "wextract/site_match.hpp"

namespace wextract {

using nlohmann::json;

namespace {

json answer_to_json(const MatchAnswer& answer) {
  return json{{"url", answer.url->raw},
              {"amount", format_minor(answer.price->amount_minor)},
              {"amount_minor", answer.price->amount_minor},
              {"currency", answer.price->currency_code},
              {"observed_at", *answer.observed_at}};
}

}  // namespace

json outcome_to_json(const ExtractionOutcome& outcome) {
  json trace = json::array();
  for (const TierAttempt& attempt : outcome.tier_trace)
    trace.push_back({{"tier", attempt.tier},
                     {"hit", attempt.hit},
                     {"reason", attempt.reason}});
  json out{{"code", static_cast<int>(outcome.code)},
           {"url", outcome.url.raw},
           {"decided_at", outcome.decided_at},
           {"tier_trace", trace}};
  if (outcome.price) {
    out["amount"] = format_minor(outcome.price->amount_minor);
    out["amount_minor"] = outcome.price->amount_minor;
    out["currency"] = outcome.price->currency_code;
  }
  return out;
}

struct PriceService::Impl {
  httplib::Server server;
};

PriceService::PriceService(SocialStore& social, PatternStore& patterns,
                           Backend& backend, OrchestratorConfig config,
                           std::function<Timestamp()> clock)
    : social_(social),
      patterns_(patterns),
      backend_(backend),
      config_(config),
      clock_(std::move(clock)),
      impl_(std::make_unique<Impl>()) {
  config_.validate();
  install_routes();
}

PriceService::~PriceService() { stop(); }

void PriceService::install_routes() {
  httplib::Server& server = impl_->server;

  server.Get("/price", [this](const httplib::Request& req,
                              httplib::Response& res) {
    if (!req.has_param("entity") || !req.has_param("site")) {
      res.status = 400;
      res.set_content(json{{"error", "entity and site are required"}}.dump(),
                      "application/json");
      return;
    }
    SiteQuery query{req.get_param_value("entity"), req.get_param_value("site")};
    if (req.get_param_value("all") == "1") {
      json matches = json::array();
      for (const MatchAnswer& answer : match_all(query, social_))
        matches.push_back(answer_to_json(answer));
      res.set_content(json{{"matches", matches}}.dump(), "application/json");
      return;
    }
    MatchAnswer answer = match(query, social_);
    if (answer.empty()) {
      res.status = 404;
      res.set_content("{}", "application/json");
      return;
    }
    res.set_content(answer_to_json(answer).dump(), "application/json");
  });

  server.Post("/extract", [this](const httplib::Request& req,
                                 httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      res.status = 400;
      res.set_content(json{{"error", "body must be a JSON object"}}.dump(),
                      "application/json");
      return;
    }
    auto url = PageUrl::parse(body.value("url", ""));
    if (!url) {
      res.status = 400;
      res.set_content(json{{"error", "bad url"}}.dump(), "application/json");
      return;
    }
    std::string entity = body.value("entity", "");
    std::size_t stripe = std::hash<std::string>{}(url->raw) % url_stripes_.size();
    std::lock_guard<std::mutex> lock(url_stripes_[stripe]);
    ExtractionOutcome outcome =
        extract(*url, entity, clock_(), config_, social_, patterns_, backend_);
    res.set_content(outcome_to_json(outcome).dump(), "application/json");
  });
}

int PriceService::bind(const std::string& host, int port) {
  httplib::Server& server = impl_->server;
  if (port == 0) return server.bind_to_any_port(host);
  return server.bind_to_port(host, port) ? port : -1;
}

void PriceService::run() { impl_->server.listen_after_bind(); }

bool PriceService::start() {
  thread_ = std::thread([this]() { impl_->server.listen_after_bind(); });
  for (int i = 0; i < 500; ++i) {
    if (impl_->server.is_running()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return false;
}

void PriceService::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace wextract
