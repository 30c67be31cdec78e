#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "llmap/dataset_gen.hpp"
#include "llmap/http_service.hpp"
#include "llmap/json_io.hpp"
#include "mock_server.hpp"

using namespace llmap;

namespace {

const std::string kFixture = std::string(LLMAP_TEST_DATA) + "/cambridge.json";

Intent apply_turns(const std::vector<std::string>& turns) {
  Intent intent;
  for (const auto& t : turns) {
    intent = merge_correction(intent, parse_rule(t), t);
  }
  return intent;
}

ServiceConfig fixture_service() {
  ServiceConfig sc;
  sc.dataset = load_fixture(kFixture);
  sc.travel = travel_config_for(sc.dataset.scenario);
  return sc;
}

// register_routes on an ephemeral port plus a client bound to it.
struct LiveService {
  PlannerService service;
  llmap::testing::MockServer mock;
  std::unique_ptr<httplib::Client> client;

  explicit LiveService(ServiceConfig sc) : service(std::move(sc)) {
    register_routes(mock.server(), service);
    mock.start();
    client = std::make_unique<httplib::Client>(mock.url());
  }

  std::string create() {
    auto res = client->Post("/sessions", "", "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    return nlohmann::json::parse(res->body)["id"].get<std::string>();
  }

  httplib::Result say(const std::string& id, const std::string& text) {
    return client->Post("/sessions/" + id + "/message", nlohmann::json{{"text", text}}.dump(),
                        "application/json");
  }
};

}  // namespace

TEST(Merge, CorrectionSequence) {
  EXPECT_EQ(apply_turns({"Visit the bank and the library."}).pois,
            (std::vector<std::string>{"bank", "library"}));

  const auto added = apply_turns({"Visit the bank and the library.", "Also add the pharmacy."});
  EXPECT_EQ(added.pois, (std::vector<std::string>{"bank", "library", "pharmacy"}));

  const auto skipped = apply_turns(
      {"Visit the bank and the library.", "Also add the pharmacy.", "Skip the library."});
  EXPECT_EQ(skipped.pois, (std::vector<std::string>{"bank", "pharmacy"}));

  const auto timed = apply_turns({"Visit the bank and the library.", "Actually, finish by 18:00."});
  EXPECT_EQ(timed.pois, (std::vector<std::string>{"bank", "library"}));
  EXPECT_EQ(timed.time_limit, TimeOfDay{18 * 60});

  const auto ordered = apply_turns(
      {"Visit the bank and the library.", "Go to the library before the bank.", "I am in a hurry."});
  EXPECT_EQ(ordered.pois, (std::vector<std::string>{"bank", "library"}));
  EXPECT_EQ(ordered.dependencies, (std::vector<Dependency>{{"library", "bank"}}));
  EXPECT_EQ(ordered.quality_weight, 0.3);
  EXPECT_EQ(ordered.distance_weight, 0.7);
}

TEST(Merge, ReplacementDropsStaleDependencies) {
  const auto replaced = apply_turns({"Visit the bank and the library by 18:00.",
                                     "Go to the library before the bank.",
                                     "Let's do the supermarket instead."});
  EXPECT_EQ(replaced.pois, std::vector<std::string>{"supermarket"});
  EXPECT_TRUE(replaced.dependencies.empty());
  EXPECT_EQ(replaced.time_limit, TimeOfDay{18 * 60});
  EXPECT_TRUE(is_valid(replaced));
}

TEST(Merge, UnparsableCorrectionKeepsIntent) {
  const auto before = apply_turns({"Visit the bank by 17:00."});
  const auto after = merge_correction(before, parse_rule("hmm, thanks"), "hmm, thanks");
  EXPECT_EQ(after, before);
}

TEST(Service, MessagePlanAndView) {
  PlannerService service(fixture_service());
  const auto id = service.create_session();
  const auto msg = service.message(id, "Visit a pharmacy and a bank.");
  EXPECT_FALSE(msg.rule_fallback);
  EXPECT_EQ(msg.intent.pois, (std::vector<std::string>{"pharmacy", "bank"}));
  EXPECT_NE(msg.reply.find("the pharmacy and the bank"), std::string::npos);

  const auto plan = service.plan(id);
  EXPECT_EQ(plan.result.status, SolveStatus::found);
  EXPECT_EQ(plan.result.route.stops.size(), 2u);

  const auto view = service.view(id);
  EXPECT_EQ(view["history"].size(), 2u);
  EXPECT_EQ(view["last_status"], "found");
  EXPECT_EQ(view["dataset"], "cambridge-fixture");
  EXPECT_THROW(service.plan("s999-000000000000"), SessionNotFound);
}

TEST(Service, ReplayIsDeterministic) {
  const std::vector<std::string> turns = {"Visit the library, the bank and a supermarket.",
                                          "Finish by 16:00.", "Also a pharmacy.",
                                          "Skip the supermarket.", "Quick please."};
  std::vector<nlohmann::json> plans;
  for (int run = 0; run < 2; ++run) {
    PlannerService service(fixture_service());
    const auto id = service.create_session();
    for (const auto& t : turns) {
      service.message(id, t);
    }
    plans.push_back(plan_to_json(service.plan(id)));
  }
  EXPECT_EQ(plans[0], plans[1]);
}

TEST(Service, SnapshotSurvivesRestart) {
  const auto path = std::filesystem::temp_directory_path() / "llmap_sessions_test.json";
  std::filesystem::remove(path);
  std::string id;
  nlohmann::json before;
  {
    auto sc = fixture_service();
    sc.snapshot_path = path;
    PlannerService service(std::move(sc));
    id = service.create_session();
    service.message(id, "Visit the bank and the library by 15:00.");
    before = service.view(id);
  }
  ASSERT_TRUE(std::filesystem::exists(path));
  auto sc = fixture_service();
  sc.snapshot_path = path;
  PlannerService restored(std::move(sc));
  EXPECT_EQ(restored.view(id), before);
  const auto next = restored.create_session();
  EXPECT_NE(next, id);
  EXPECT_EQ(restored.store().size(), 2u);
  std::filesystem::remove(path);
}

TEST(Http, EndToEnd) {
  LiveService live(fixture_service());
  auto health = live.client->Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);

  const auto id = live.create();
  auto msg = live.say(id, "Visit a pharmacy and a bank.");
  ASSERT_TRUE(msg);
  EXPECT_EQ(msg->status, 200);
  const auto msg_json = nlohmann::json::parse(msg->body);
  EXPECT_EQ(msg_json["intent"]["pois"], (nlohmann::json{"pharmacy", "bank"}));
  EXPECT_EQ(msg_json["rule_fallback"], false);

  auto plan = live.client->Post("/sessions/" + id + "/plan", "", "application/json");
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->status, 200);
  const auto plan_json = nlohmann::json::parse(plan->body);
  EXPECT_EQ(plan_json["status"], "found");
  EXPECT_EQ(plan_json["route"]["stops"].size(), 2u);

  auto view = live.client->Get("/sessions/" + id);
  ASSERT_TRUE(view);
  EXPECT_EQ(view->status, 200);
  EXPECT_EQ(nlohmann::json::parse(view->body)["last_route"], plan_json["route"]);
}

TEST(Http, ErrorStatuses) {
  LiveService live(fixture_service());
  const auto id = live.create();

  auto missing = live.say("nope", "bank");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(live.client->Post("/sessions/nope/plan", "", "application/json")->status, 404);
  EXPECT_EQ(live.client->Get("/sessions/nope")->status, 404);

  auto not_json = live.client->Post("/sessions/" + id + "/message", "bank", "text/plain");
  ASSERT_TRUE(not_json);
  EXPECT_EQ(not_json->status, 400);
  auto wrong_shape = live.client->Post("/sessions/" + id + "/message", R"({"text": 3})",
                                       "application/json");
  EXPECT_EQ(wrong_shape->status, 400);
}

TEST(Http, LlmOutageFallsBackToRules) {
  auto sc = fixture_service();
  sc.parser = ParserKind::llm;
  LlmConfig llm;
  llm.base_url = "http://127.0.0.1:1";
  llm.max_retries = 0;
  llm.timeout_s = 1.0;
  sc.llm = llm;
  LiveService live(std::move(sc));
  const auto id = live.create();
  auto res = live.say(id, "Visit the bank by 15:00.");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 502);
  const auto body = nlohmann::json::parse(res->body);
  EXPECT_EQ(body["rule_fallback"], true);
  EXPECT_TRUE(body.contains("error"));
  EXPECT_EQ(body["intent"]["pois"], nlohmann::json{"bank"});
  EXPECT_EQ(body["intent"]["time_limit"], "15:00");
}

TEST(Cli, ExitCodes) {
  std::ostringstream out;
  std::ostringstream err;
  cli::PlanOptions opt;
  opt.source.map = kFixture;
  opt.query = "visit a pharmacy and a bank";
  EXPECT_EQ(cli::run_plan(opt, out, err), cli::kExitOk);

  opt.query = "visit the bank by 10:05";
  EXPECT_EQ(cli::run_plan(opt, out, err), cli::kExitFallback);

  cli::PlanOptions no_source;
  no_source.query = "bank";
  EXPECT_EQ(cli::run_plan(no_source, out, err), cli::kExitUsage);

  cli::PlanOptions bad_map = opt;
  bad_map.source.map = "/nonexistent/map.json";
  EXPECT_EQ(cli::run_plan(bad_map, out, err), cli::kExitInputError);

  cli::PlanOptions two_sources = opt;
  two_sources.source.synth_seed = 1;
  EXPECT_EQ(cli::run_plan(two_sources, out, err), cli::kExitUsage);
}

TEST(Cli, PlanMatchesHttpRoute) {
  const std::string query = "Visit the library, the bank and a supermarket. Finish by 16:00.";
  std::ostringstream out;
  std::ostringstream err;
  cli::PlanOptions opt;
  opt.source.map = kFixture;
  opt.query = query;
  ASSERT_EQ(cli::run_plan(opt, out, err), cli::kExitOk) << err.str();
  const auto cli_json = nlohmann::json::parse(out.str());

  LiveService live(fixture_service());
  const auto id = live.create();
  ASSERT_EQ(live.say(id, query)->status, 200);
  const auto http_json =
      nlohmann::json::parse(live.client->Post("/sessions/" + id + "/plan", "", "application/json")->body);
  EXPECT_EQ(cli_json["route"], http_json["route"]);
  EXPECT_EQ(cli_json["status"], http_json["status"]);
  EXPECT_EQ(cli_json["candidates_examined"], http_json["candidates_examined"]);
}

TEST(Cli, GenWritesChecksummedFile) {
  const auto path = std::filesystem::temp_directory_path() / "llmap_gen_test.jsonl";
  std::ostringstream out;
  std::ostringstream err;
  cli::GenOptions opt;
  opt.n = 20;
  opt.seed = 3;
  opt.out = path.string();
  ASSERT_EQ(cli::run_gen(opt, out, err), cli::kExitOk) << err.str();
  EXPECT_NE(err.str().find("fnv1a64"), std::string::npos);
  EXPECT_EQ(read_jsonl(path).size(), 20u);
  std::filesystem::remove(path);
}

TEST(Cli, EvalWritesReports) {
  const auto dir = std::filesystem::temp_directory_path() / "llmap_eval_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto data = dir / "data.jsonl";
  write_jsonl(data, gen_dataset(15, 2, default_synth_city(0).scenario));

  std::ostringstream out;
  std::ostringstream err;
  cli::EvalOptions opt;
  opt.source.synth_seed = 0;
  opt.dataset = data.string();
  opt.parser = "rule";
  opt.out_dir = dir.string();
  ASSERT_EQ(cli::run_eval(opt, out, err), cli::kExitOk) << err.str();
  for (const char* f : {"per_sample.csv", "per_sample.jsonl", "summary.json", "summary.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto summary = nlohmann::json::parse(out.str());
  EXPECT_EQ(summary["samples"], 15);
  EXPECT_EQ(summary["route"]["time_overshoot_hours"], 0.0);
  EXPECT_EQ(summary["parser_metrics"]["pois"]["f1"], 1.0);

  opt.planner = "greedy";
  EXPECT_EQ(cli::run_eval(opt, out, err), cli::kExitUsage);
  std::filesystem::remove_all(dir);
}
