#include "commands.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <httplib.h>

#include "llmap/dataset_gen.hpp"
#include "llmap/evaluator.hpp"
#include "llmap/graph_builder.hpp"
#include "llmap/http_service.hpp"
#include "llmap/intent_parser.hpp"
#include "llmap/json_io.hpp"
#include "llmap/msgs_solver.hpp"
#include "llmap/oracle.hpp"

namespace llmap::cli {

namespace {

Instant parse_depart(const std::string& text) {
  const auto t = Instant::parse(text);
  if (!t) {
    throw UsageError("--depart expects \"Mon 10:00\" style, got '" + text + "'");
  }
  return *t;
}

LlmConfig llm_from_env(bool cot) {
  auto cfg = LlmConfig::from_env();
  if (!cfg) {
    throw std::runtime_error("--parser llm needs LLMAP_LLM_BASE_URL");
  }
  cfg->cot = cot;
  return *cfg;
}

ParseOutcome parse_with(const std::string& parser, const std::string& text, bool cot) {
  if (parser == "llm") {
    return parse_llm(text, llm_from_env(cot));
  }
  return parse_rule(text);
}

nlohmann::json repairs_json(const std::vector<Repair>& repairs) {
  nlohmann::json out = nlohmann::json::array();
  for (auto r : repairs) {
    out.push_back(std::string(to_string(r)));
  }
  return out;
}

void print_text(std::ostream& out, const ParseOutcome& parsed, const PlanOutcome& plan) {
  const auto& r = plan.result;
  out << describe_intent(parsed.intent) << '\n';
  out << "status: " << (r.status == SolveStatus::found ? "found" : "fallback") << '\n';
  for (std::size_t i = 0; i < r.route.stops.size(); ++i) {
    out << "  " << r.route.arrivals[i].to_string() << " - " << r.route.departures[i].to_string()
        << "  " << r.route.stops[i] << '\n';
  }
  out << std::fixed << std::setprecision(2);
  out << "finish: " << r.route.finish_time.to_string() << '\n';
  out << "length: " << plan.metrics.length_km << " km\n";
  out << "completion: " << 100.0 * plan.metrics.completion_rate << "%\n";
  out << "mean rating: " << plan.metrics.mean_rating << '\n';
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

}  // namespace

PoiDataset load_map(const MapSource& src) {
  const int given = (src.map ? 1 : 0) + (src.synth_seed ? 1 : 0) + (src.live ? 1 : 0);
  if (given == 0) {
    throw UsageError("one of --map, --synth-seed or --live is required");
  }
  if (given > 1) {
    throw UsageError("--map, --synth-seed and --live are mutually exclusive");
  }
  if (src.map) {
    return load_fixture(*src.map);
  }
  if (src.synth_seed) {
    return default_synth_city(*src.synth_seed, src.per_type);
  }
  const auto endpoint = PlacesEndpoint::from_env();
  if (!endpoint) {
    throw std::runtime_error("--live needs LLMAP_PLACES_BASE_URL");
  }
  ScenarioInfo scenario = default_synth_city(0, 1).scenario;
  scenario.name = "boston-mit-live";
  return fetch_live(*endpoint, scenario, hipp_taxonomy(), src.page_limit);
}

int run_plan(const PlanOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const Instant depart = parse_depart(opt.depart);
    const PoiDataset ds = load_map(opt.source);
    const ParseOutcome parsed = parse_with(opt.parser, opt.query, opt.cot);
    const TravelConfig cfg = travel_config_for(ds.scenario, depart, opt.speed_kmh);
    const PlanOutcome plan = plan_intent(ds, parsed.intent, cfg);
    if (opt.out == "text") {
      print_text(out, parsed, plan);
    } else {
      nlohmann::json j = plan_to_json(plan);
      j["intent"] = intent_to_json(parsed.intent);
      j["repairs"] = repairs_json(parsed.repairs);
      j["parser"] = std::string(to_string(parsed.parser_kind));
      j["dataset"] = ds.scenario.name;
      out << j.dump(2) << '\n';
    }
    return plan.result.status == SolveStatus::found ? kExitOk : kExitFallback;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int run_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    MapSource src = opt.source;
    if (!src.map && !src.synth_seed && !src.live) {
      src.synth_seed = 0;
    }
    const ScenarioInfo scenario = load_map(src).scenario;
    auto samples = gen_dataset(opt.n, opt.seed, scenario);
    if (opt.writer == "llm") {
      const LlmConfig cfg = llm_from_env(false);
      for (auto& s : samples) {
        s.instruction = gen_instruction_llm(s.label, cfg);
      }
    }
    const std::string text = to_jsonl(samples);
    if (opt.out.empty() || opt.out == "-") {
      out << text;
    } else {
      write_jsonl(opt.out, samples);
      char hex[20];
      std::snprintf(hex, sizeof(hex), "%016llx",
                    static_cast<unsigned long long>(fnv1a64(text)));
      err << "wrote " << samples.size() << " samples to " << opt.out << " (fnv1a64 " << hex
          << ")\n";
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int run_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.planner != "msgs" && opt.planner != "oracle-true") {
      throw UsageError("--planner must be msgs or oracle-true");
    }
    const Instant depart = parse_depart(opt.depart);
    const PoiDataset ds = load_map(opt.source);
    const auto samples = read_jsonl(opt.dataset);
    const TravelConfig cfg = travel_config_for(ds.scenario, depart, opt.speed_kmh);
    std::optional<LlmConfig> llm;
    if (opt.parser == "llm") {
      llm = llm_from_env(opt.cot);
    }

    std::filesystem::create_directories(opt.out_dir);
    std::ofstream csv(std::filesystem::path(opt.out_dir) / "per_sample.csv");
    std::ofstream jsonl(std::filesystem::path(opt.out_dir) / "per_sample.jsonl");
    csv << "id,status,note,mean_rating,mean_reviews,length_km,completion_rate,"
           "time_overshoot_hours,dependency_violated,opening_violated,poi_f1,dependency_f1,"
           "time_accuracy,weight_similarity\n";

    std::vector<RouteMetrics> route_rows;
    std::vector<ParserMetrics> parser_rows;
    std::size_t skipped = 0;
    for (const auto& sample : samples) {
      Intent intent = sample.label;
      std::optional<ParserMetrics> pm;
      nlohmann::json row = {{"id", sample.id}};
      if (opt.parser != "label") {
        const ParseOutcome parsed =
            llm ? parse_llm(sample.instruction, *llm) : parse_rule(sample.instruction);
        intent = parsed.intent;
        pm = parser_metrics(sample.label, intent);
        parser_rows.push_back(*pm);
        row["estimate"] = intent_to_json(intent);
        row["repairs"] = repairs_json(parsed.repairs);
        row["parser_metrics"] = parser_metrics_to_json(*pm);
      }
      const PoiGraph g = build_graph(ds, intent, cfg);
      SolverResult result;
      std::string note;
      try {
        result = opt.planner == "msgs" ? solve(g, intent, cfg) : oracle_true_opt(g, intent, cfg);
      } catch (const OracleGuardError& e) {
        ++skipped;
        row["status"] = "skipped";
        row["note"] = e.what();
        jsonl << row.dump() << '\n';
        csv << sample.id << ",skipped," << csv_escape(e.what()) << ",,,,,,,,,,,\n";
        continue;
      }
      // Score against the ground-truth label, over every POI of the map.
      const RouteMetrics m = route_metrics(result.route, sample.label, ds.pois, cfg);
      route_rows.push_back(m);
      const char* status = result.status == SolveStatus::found ? "found" : "fallback";
      row["status"] = status;
      row["route"] = route_to_json(result.route);
      row["metrics"] = route_metrics_to_json(m);
      jsonl << row.dump() << '\n';
      csv << sample.id << ',' << status << ",," << m.mean_rating << ',' << m.mean_reviews << ','
          << m.length_km << ',' << m.completion_rate << ',' << m.time_overshoot_hours << ','
          << m.dependency_violated << ',' << m.opening_violated << ',';
      if (pm) {
        csv << pm->pois.f1 << ',' << pm->dependencies.f1 << ',' << pm->time_accuracy << ','
            << pm->weight_similarity;
      } else {
        csv << ",,,";
      }
      csv << '\n';
    }

    nlohmann::json summary = {{"planner", opt.planner},
                              {"parser", opt.parser},
                              {"dataset", opt.dataset},
                              {"samples", samples.size()},
                              {"skipped", skipped}};
    if (!route_rows.empty()) {
      const RouteSummary rs = aggregate(route_rows);
      summary["route"] = summary_to_json(rs);
      std::ofstream(std::filesystem::path(opt.out_dir) / "summary.csv") << summary_to_csv(rs);
    }
    if (!parser_rows.empty()) {
      summary["parser_metrics"] = summary_to_json(aggregate(parser_rows));
    }
    std::ofstream(std::filesystem::path(opt.out_dir) / "summary.json") << summary.dump(2) << '\n';
    out << summary.dump(2) << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

namespace {
httplib::Server* g_server = nullptr;

extern "C" void stop_server(int) {
  if (g_server != nullptr) {
    g_server->stop();
  }
}
}  // namespace

int run_serve(const ServeOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    ServiceConfig sc;
    sc.dataset = load_map(opt.source);
    sc.travel = travel_config_for(sc.dataset.scenario, parse_depart(opt.depart), opt.speed_kmh);
    if (opt.parser == "llm") {
      sc.parser = ParserKind::llm;
      sc.llm = llm_from_env(opt.cot);
    }
    if (opt.snapshot) {
      sc.snapshot_path = *opt.snapshot;
    }
    int port = 8080;
    if (opt.port) {
      port = *opt.port;
    } else if (const char* env = std::getenv("LLMAP_PORT")) {
      port = std::stoi(env);
    }

    PlannerService service(std::move(sc));
    httplib::Server server;
    register_routes(server, service);
    g_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);
    out << "serving " << service.config().dataset.scenario.name << " on http://" << opt.host << ':'
        << port << std::endl;
    if (!server.listen(opt.host, port)) {
      err << "error: cannot listen on " << opt.host << ':' << port << '\n';
      return kExitInputError;
    }
    g_server = nullptr;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace llmap::cli
