#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llmap/core_model.hpp"
#include "llmap/intent_parser.hpp"
#include "llmap/map_provider.hpp"
#include "llmap/session.hpp"

namespace httplib {
class Server;
}

namespace llmap {

/// Scenario start/end plus departure and speed.
TravelConfig travel_config_for(const ScenarioInfo& scenario, Instant departure = {600.0},
                               double speed_kmh = 30.0);

struct PlanOutcome {
  SolverResult result;
  RouteMetrics metrics;
};

/// build_graph, solve, then score against the same intent. Shared by the CLI
/// and the HTTP service so both produce identical routes.
PlanOutcome plan_intent(const PoiDataset& dataset, const Intent& intent, const TravelConfig& cfg);

nlohmann::json plan_to_json(const PlanOutcome& plan);

struct ServiceConfig {
  PoiDataset dataset;
  TravelConfig travel;
  ParserKind parser = ParserKind::rule;
  std::optional<LlmConfig> llm;
  std::optional<std::filesystem::path> snapshot_path;
};

struct MessageOutcome {
  Intent intent;
  std::vector<Repair> repairs;
  std::string reply;
  /// Set when the model endpoint failed and the rule parser answered instead.
  bool rule_fallback = false;
  std::string error;
};

/// Session logic behind the HTTP endpoints, usable without a socket.
class PlannerService {
 public:
  explicit PlannerService(ServiceConfig cfg);

  std::string create_session();
  MessageOutcome message(const std::string& session_id, const std::string& text);
  PlanOutcome plan(const std::string& session_id);
  nlohmann::json view(const std::string& session_id);

  const ServiceConfig& config() const { return cfg_; }
  SessionStore& store() { return store_; }

 private:
  ServiceConfig cfg_;
  SessionStore store_;
};

/// Attaches the session API to `server`.
void register_routes(httplib::Server& server, PlannerService& service);

nlohmann::json message_to_json(const MessageOutcome& m);

/// Plain-language summary of an intent, used as the assistant reply.
std::string describe_intent(const Intent& intent);

}  // namespace llmap
