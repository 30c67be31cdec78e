#include "llmap/http_service.hpp"

#include <sstream>

#include <httplib.h>

#include "llmap/graph_builder.hpp"
#include "llmap/json_io.hpp"

namespace llmap {

TravelConfig travel_config_for(const ScenarioInfo& scenario, Instant departure, double speed_kmh) {
  TravelConfig cfg;
  cfg.start = scenario.start;
  cfg.end = scenario.end;
  cfg.departure = departure;
  cfg.speed_kmh = speed_kmh;
  return cfg;
}

PlanOutcome plan_intent(const PoiDataset& dataset, const Intent& intent, const TravelConfig& cfg) {
  const PoiGraph g = build_graph(dataset, intent, cfg);
  PlanOutcome out;
  out.result = solve(g, intent, cfg);
  out.metrics = route_metrics(out.result.route, intent, g, cfg);
  return out;
}

nlohmann::json plan_to_json(const PlanOutcome& plan) {
  const auto& r = plan.result;
  return {{"status", r.status == SolveStatus::found ? "found" : "fallback"},
          {"route", route_to_json(r.route)},
          {"metrics", route_metrics_to_json(plan.metrics)},
          {"subset_size_found", r.subset_size_found},
          {"candidates_examined", r.candidates_examined},
          {"subgraph_searches", r.subgraph_searches},
          {"rejections",
           {{"dependency", r.rejections.dependency},
            {"empty_type", r.rejections.empty_type},
            {"time_limit", r.rejections.time_limit},
            {"opening_hours", r.rejections.opening_hours}}}};
}

std::string describe_intent(const Intent& intent) {
  if (intent.pois.empty()) {
    return "I could not find any places to visit in that request.";
  }
  std::ostringstream out;
  out << "Planning a route through ";
  for (std::size_t i = 0; i < intent.pois.size(); ++i) {
    if (i > 0) {
      out << (i + 1 == intent.pois.size() ? " and " : ", ");
    }
    out << "the " << intent.pois[i];
  }
  if (intent.time_limit) {
    out << ", finishing by " << intent.time_limit->to_string();
  }
  for (const auto& d : intent.dependencies) {
    out << ", visiting the " << d.before << " before the " << d.after;
  }
  char weights[64];
  std::snprintf(weights, sizeof(weights), " (quality %.2f, distance %.2f).", intent.quality_weight,
                intent.distance_weight);
  out << weights;
  return out.str();
}

nlohmann::json message_to_json(const MessageOutcome& m) {
  nlohmann::json repairs = nlohmann::json::array();
  for (auto r : m.repairs) {
    repairs.push_back(std::string(to_string(r)));
  }
  nlohmann::json j = {{"intent", intent_to_json(m.intent)},
                      {"repairs", repairs},
                      {"reply", m.reply},
                      {"rule_fallback", m.rule_fallback}};
  if (!m.error.empty()) {
    j["error"] = m.error;
  }
  return j;
}

PlannerService::PlannerService(ServiceConfig cfg)
    : cfg_(std::move(cfg)), store_(cfg_.snapshot_path) {}

std::string PlannerService::create_session() { return store_.create(cfg_.dataset.scenario.name); }

MessageOutcome PlannerService::message(const std::string& session_id, const std::string& text) {
  return store_.with_session(session_id, [&](Session& s) {
    MessageOutcome out;
    ParseOutcome parsed;
    if (cfg_.parser == ParserKind::llm && cfg_.llm) {
      try {
        parsed = parse_llm(text, *cfg_.llm);
      } catch (const LlmTransportError& e) {
        parsed = parse_rule(text);
        out.rule_fallback = true;
        out.error = e.what();
      }
    } else {
      parsed = parse_rule(text);
    }
    s.history.push_back({"user", text});
    s.current_intent = merge_correction(s.current_intent, parsed, text);
    out.intent = s.current_intent;
    out.repairs = parsed.repairs;
    out.reply = describe_intent(s.current_intent);
    s.history.push_back({"assistant", out.reply});
    return out;
  });
}

PlanOutcome PlannerService::plan(const std::string& session_id) {
  return store_.with_session(session_id, [&](Session& s) {
    PlanOutcome out = plan_intent(cfg_.dataset, s.current_intent, cfg_.travel);
    s.last_result = out.result;
    s.last_metrics = out.metrics;
    return out;
  });
}

nlohmann::json PlannerService::view(const std::string& session_id) {
  return store_.with_session(session_id, [&](Session& s) { return session_to_json(s); });
}

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const SessionNotFound& e) {
    send_error(res, 404, e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

void register_routes(httplib::Server& server, PlannerService& service) {
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  server.Post("/sessions", [&service](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, {{"id", service.create_session()}}); });
  });

  server.Post(R"(/sessions/([^/]+)/message)",
              [&service](const httplib::Request& req, httplib::Response& res) {
                const auto body = nlohmann::json::parse(req.body, nullptr, false);
                if (body.is_discarded() || !body.is_object() || !body.contains("text") ||
                    !body["text"].is_string()) {
                  send_error(res, 400, "body must be a JSON object with a string 'text'");
                  return;
                }
                guarded(res, [&] {
                  const auto out = service.message(req.matches[1], body["text"].get<std::string>());
                  send_json(res, out.rule_fallback ? 502 : 200, message_to_json(out));
                });
              });

  server.Post(R"(/sessions/([^/]+)/plan)",
              [&service](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] { send_json(res, 200, plan_to_json(service.plan(req.matches[1]))); });
              });

  server.Get(R"(/sessions/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.view(req.matches[1])); });
  });
}

}  // namespace llmap
