#include <gtest/gtest.h>

#include <atomic>

#include "llmap/intent_parser.hpp"
#include "llmap/json_io.hpp"
#include "llmap/prompts.hpp"
#include "mock_server.hpp"

using namespace llmap;

namespace {

const char* kHippInstruction =
    "Today, let's plan to visit the bank, library, supermarket, and shopping mall. Please be "
    "home by 19:00. Prioritize visiting POIs with high ratings as they are more important "
    "today. Start at the bank before heading to the library, and continue to the supermarket "
    "right after the library.";

std::string completion(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}
      .dump();
}

// Chat-completions mock that answers from `reply` and counts requests.
struct ChatMock {
  llmap::testing::MockServer mock;
  std::atomic<int> calls{0};
  std::atomic<int> failures_before_success{0};
  int failure_status = 503;
  std::string reply;
  nlohmann::json last_request;

  ChatMock() {
    mock.server().Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                      httplib::Response& res) {
      ++calls;
      last_request = nlohmann::json::parse(req.body);
      if (failures_before_success > 0) {
        --failures_before_success;
        res.status = failure_status;
        res.set_content("{}", "application/json");
        return;
      }
      res.set_content(completion(reply), "application/json");
    });
    mock.start();
  }

  LlmConfig config() const {
    LlmConfig cfg;
    cfg.base_url = mock.url() + "/v1";
    cfg.api_key = "test-key";
    cfg.model = "mock-model";
    cfg.timeout_s = 5.0;
    return cfg;
  }
};

}  // namespace

TEST(TimeExpression, AcceptsCommonForms) {
  EXPECT_EQ(parse_time_expression("19:00")->minutes, 1140);
  EXPECT_EQ(parse_time_expression("7 pm")->minutes, 1140);
  EXPECT_EQ(parse_time_expression("7:30pm")->minutes, 1170);
  EXPECT_EQ(parse_time_expression("7 p.m.")->minutes, 1140);
  EXPECT_EQ(parse_time_expression("12 pm")->minutes, 720);
  EXPECT_EQ(parse_time_expression("12am")->minutes, 1440);
  EXPECT_EQ(parse_time_expression("noon")->minutes, 720);
  EXPECT_EQ(parse_time_expression("midnight")->minutes, 1440);
  EXPECT_EQ(parse_time_expression("24:00")->minutes, 1440);
  EXPECT_FALSE(parse_time_expression("13 pm"));
  EXPECT_FALSE(parse_time_expression("25:00"));
  EXPECT_FALSE(parse_time_expression("soon"));
}

TEST(RuleParser, ParsesTheHippInstruction) {
  const auto out = parse_rule(kHippInstruction);
  EXPECT_EQ(out.parser_kind, ParserKind::rule);
  EXPECT_TRUE(out.repairs.empty());
  const std::vector<std::string> pois = {"bank", "library", "supermarket", "shopping mall"};
  EXPECT_EQ(out.intent.pois, pois);
  EXPECT_EQ(out.intent.time_limit, TimeOfDay{1140});
  const std::vector<Dependency> deps = {{"bank", "library"}, {"library", "supermarket"}};
  EXPECT_EQ(out.intent.dependencies, deps);
  EXPECT_EQ(out.intent.quality_weight, 0.7);
  EXPECT_EQ(out.intent.distance_weight, 0.3);
  EXPECT_TRUE(is_valid(out.intent));
}

TEST(RuleParser, SinglePoiDefaultsTheRest) {
  const auto out = parse_rule("go to the pharmacy");
  EXPECT_EQ(out.intent.pois, std::vector<std::string>{"pharmacy"});
  EXPECT_FALSE(out.intent.time_limit);
  EXPECT_TRUE(out.intent.dependencies.empty());
  EXPECT_EQ(out.intent.quality_weight, 0.5);
  EXPECT_TRUE(out.repairs.empty());
}

TEST(RuleParser, EmptyTextIsDefaultedAll) {
  const auto out = parse_rule("");
  EXPECT_EQ(out.intent, default_intent());
  EXPECT_TRUE(out.has(Repair::defaulted_all));
  EXPECT_TRUE(parse_rule("hello there!").has(Repair::defaulted_all));
}

TEST(RuleParser, OrderingCues) {
  EXPECT_EQ(parse_rule("After the bank, go to the library.").intent.dependencies,
            (std::vector<Dependency>{{"bank", "library"}}));
  EXPECT_EQ(parse_rule("Visit the pharmacy after the grocery store.").intent.dependencies,
            (std::vector<Dependency>{{"supermarket", "pharmacy"}}));
  EXPECT_EQ(parse_rule("Go to the mall first, then the bank.").intent.dependencies,
            (std::vector<Dependency>{{"shopping mall", "bank"}}));
  const auto timed = parse_rule("Visit the bank and the library before 5 pm.");
  EXPECT_TRUE(timed.intent.dependencies.empty());
  EXPECT_EQ(timed.intent.time_limit, TimeOfDay{17 * 60});
}

TEST(RuleParser, PreferenceCues) {
  const auto quick = parse_rule("Visit the bank, I am in a hurry.");
  EXPECT_EQ(quick.intent.quality_weight, 0.3);
  EXPECT_EQ(quick.intent.distance_weight, 0.7);
  const auto both = parse_rule("Visit the bank, best rated but quick.");
  EXPECT_EQ(both.intent.quality_weight, 0.5);
  const auto balanced = parse_rule("Visit the bank and balance ratings with distance.");
  EXPECT_EQ(balanced.intent.quality_weight, 0.5);
}

TEST(RuleParser, NeverProducesInvalidIntents) {
  const char* inputs[] = {"", "the bank before the bank", "library after library then museum",
                          "by midnight", "before", "after", "bank then", "then bank",
                          "Visit the mall, the mall, and the MALL."};
  for (const char* text : inputs) {
    EXPECT_TRUE(is_valid(parse_rule(text).intent)) << text;
  }
}

TEST(Repair, RenormalizesOverweightPairs) {
  const auto r = repair_intent(nlohmann::json{{"pois", {"bank"}},
                                              {"time_limit", "None"},
                                              {"dependencies", nlohmann::json::array()},
                                              {"quality_weight", 0.9},
                                              {"distance_weight", 0.3}});
  EXPECT_DOUBLE_EQ(r.intent.quality_weight, 0.75);
  EXPECT_DOUBLE_EQ(r.intent.distance_weight, 0.25);
  EXPECT_EQ(r.repairs, std::vector<Repair>{Repair::renormalized_weights});
}

TEST(Repair, OneOneBecomesHalfHalf) {
  const auto r = repair_intent(nlohmann::json::parse(R"({
      "pois": ["bank", "library", "supermarket", "shopping mall"],
      "time_limit": "19:00",
      "dependencies": [["bank", "library"], ["library", "supermarket"]],
      "quality_weight": 1.0,
      "distance_weight": 1.0})"));
  EXPECT_EQ(r.intent.quality_weight, 0.5);
  EXPECT_EQ(r.intent.distance_weight, 0.5);
  EXPECT_EQ(r.repairs, std::vector<Repair>{Repair::renormalized_weights});
  EXPECT_EQ(r.intent.dependencies.size(), 2u);
}

TEST(Repair, DropsDependencyOnUnlistedPoi) {
  const auto r = repair_intent(nlohmann::json::parse(R"({
      "pois": ["bank"], "time_limit": "None",
      "dependencies": [["bank", "museum"], ["bank"], ["bank", "bank"]],
      "quality_weight": 0.5, "distance_weight": 0.5})"));
  EXPECT_TRUE(r.intent.dependencies.empty());
  EXPECT_EQ(r.repairs, std::vector<Repair>{Repair::dropped_invalid_dependency});
}

TEST(Repair, MissingPoisWithDependencies) {
  // Output that omits time_limit and lists no POIs but keeps the dependencies.
  const auto r = repair_intent(nlohmann::json::parse(R"({
      "pois": [],
      "dependencies": [["bank", "library"], ["library", "supermarket"]],
      "quality_weight": 0.5, "distance_weight": 0.5})"));
  EXPECT_TRUE(is_valid(r.intent));
  EXPECT_TRUE(r.intent.dependencies.empty());
  EXPECT_FALSE(r.intent.time_limit);
}

TEST(Repair, WrongKeysAreDefaultedAll) {
  const auto r = repair_intent(nlohmann::json::parse(R"({
      "time_constraint": "18:00", "rating_weight": 0.4, "route_weight": 0.6})"));
  EXPECT_EQ(r.intent, default_intent());
  EXPECT_EQ(r.repairs.front(), Repair::defaulted_all);
}

TEST(Repair, PartialKeysKeepWhatIsUsable) {
  const auto r = repair_intent(nlohmann::json::parse(R"({
      "pois": [" Bank ", "bank", 3], "vehicle_type": "car", "quality_weight": 0.8})"));
  EXPECT_EQ(r.intent.pois, std::vector<std::string>{"bank"});
  EXPECT_DOUBLE_EQ(r.intent.quality_weight, 0.8);
  EXPECT_DOUBLE_EQ(r.intent.distance_weight, 0.2);
  for (auto tag : {Repair::dropped_unknown_key, Repair::defaulted_field,
                   Repair::dropped_duplicate_poi}) {
    EXPECT_NE(std::find(r.repairs.begin(), r.repairs.end(), tag), r.repairs.end())
        << to_string(tag);
  }
}

TEST(Repair, ClampsOutOfRangeWeights) {
  const auto r = repair_intent(nlohmann::json::parse(R"({
      "pois": [], "time_limit": "None", "dependencies": [],
      "quality_weight": 1.4, "distance_weight": -0.2})"));
  EXPECT_EQ(r.intent.quality_weight, 1.0);
  EXPECT_EQ(r.intent.distance_weight, 0.0);
  EXPECT_EQ(r.repairs, std::vector<Repair>{Repair::clamped_weight});
}

TEST(Repair, NonObjectIsDefaultedAll) {
  for (const auto& j : {nlohmann::json(nullptr), nlohmann::json(3), nlohmann::json::array()}) {
    const auto r = repair_intent(j);
    EXPECT_EQ(r.intent, default_intent());
    EXPECT_EQ(r.repairs, std::vector<Repair>{Repair::defaulted_all});
  }
}

TEST(Repair, IsIdempotentOnItsOwnOutput) {
  const std::vector<std::string> raws = {
      R"({"pois": ["Bank", "bank", "LIBRARY"], "quality_weight": 3, "distance_weight": 1})",
      R"({"pois": ["bank"], "time_limit": "7 pm", "dependencies": [["bank", "x"]]})",
      R"({"pois": "bank", "time_limit": 19, "quality_weight": 0.25, "distance_weight": 0.25})",
      R"({"foo": 1})",
      R"({"pois": ["a", "b"], "dependencies": [["a", "b"], ["a", "b"]], "distance_weight": 0.1})",
  };
  for (const auto& text : raws) {
    const auto first = repair_intent(nlohmann::json::parse(text));
    EXPECT_TRUE(is_valid(first.intent)) << text;
    const auto second = repair_intent(intent_to_json(first.intent));
    EXPECT_EQ(second.intent, first.intent) << text;
    EXPECT_TRUE(second.repairs.empty()) << text;
  }
}

TEST(ExtractJson, FindsFirstParsableObject) {
  EXPECT_FALSE(extract_first_json("no json here"));
  EXPECT_EQ(*extract_first_json(R"(Sure! {"a": 1} and {"b": 2})"), (nlohmann::json{{"a", 1}}));
  EXPECT_EQ(*extract_first_json(R"({bad} then {"s": "}{"})"), (nlohmann::json{{"s", "}{"}}));
  EXPECT_EQ(*extract_first_json("```json\n{\"x\": {\"y\": [1, 2]}}\n```"),
            nlohmann::json::parse(R"({"x": {"y": [1, 2]}})"));
}

TEST(Prompts, FillSubstitutesKnownPlaceholders) {
  EXPECT_EQ(prompts::fill("a {x} b {y} {z}", {{"x", "1"}, {"y", "2"}}), "a 1 b 2 {z}");
  EXPECT_NE(prompts::fill(prompts::parser_user(), {{"instruction", "VISIT"}}).find("VISIT"),
            std::string::npos);
  EXPECT_FALSE(prompts::parser_system().empty());
}

TEST(LlmParser, ValidReplyIsUsedVerbatim) {
  ChatMock chat;
  chat.reply = R"({"pois": ["bank", "library"], "time_limit": "18:00",
                   "dependencies": [["bank", "library"]],
                   "quality_weight": 0.6, "distance_weight": 0.4})";
  const auto out = parse_llm("bank then library by 6pm", chat.config());
  EXPECT_EQ(out.parser_kind, ParserKind::llm);
  EXPECT_TRUE(out.repairs.empty());
  EXPECT_EQ(out.intent, intent_from_json(nlohmann::json::parse(chat.reply)));
  EXPECT_EQ(out.raw_model_text, chat.reply);
  EXPECT_EQ(chat.calls, 1);
  EXPECT_EQ(chat.last_request["model"], "mock-model");
  EXPECT_EQ(chat.last_request["messages"].size(), 2u);
  EXPECT_NE(chat.last_request["messages"][1]["content"].get<std::string>().find(
                "bank then library by 6pm"),
            std::string::npos);
}

TEST(LlmParser, OverweightReplyIsRenormalized) {
  ChatMock chat;
  chat.reply = R"(Here you go: {"pois": ["bank"], "time_limit": "None", "dependencies": [],
                   "quality_weight": 1.0, "distance_weight": 1.0})";
  const auto out = parse_llm("bank", chat.config());
  EXPECT_TRUE(out.has(Repair::renormalized_weights));
  EXPECT_EQ(out.intent.quality_weight, 0.5);
}

TEST(LlmParser, ProseReplyIsDefaultedAll) {
  ChatMock chat;
  chat.reply = "I would be happy to help you plan your day!";
  const auto out = parse_llm("bank", chat.config());
  EXPECT_EQ(out.intent, default_intent());
  EXPECT_TRUE(out.has(Repair::defaulted_all));
}

TEST(LlmParser, RetriesServerErrors) {
  ChatMock chat;
  chat.reply = R"({"pois": ["bank"], "time_limit": "None", "dependencies": [],
                   "quality_weight": 0.5, "distance_weight": 0.5})";
  chat.failures_before_success = 2;
  const auto out = parse_llm("bank", chat.config());
  EXPECT_EQ(out.intent.pois, std::vector<std::string>{"bank"});
  EXPECT_EQ(chat.calls, 3);

  chat.calls = 0;
  chat.failures_before_success = 3;
  EXPECT_THROW(parse_llm("bank", chat.config()), LlmTransportError);
  EXPECT_EQ(chat.calls, 3);
}

TEST(LlmParser, ClientErrorIsNotRetried) {
  ChatMock chat;
  chat.failure_status = 401;
  chat.failures_before_success = 5;
  try {
    parse_llm("bank", chat.config());
    FAIL() << "expected LlmTransportError";
  } catch (const LlmTransportError& e) {
    EXPECT_EQ(e.http_status(), 401);
  }
  EXPECT_EQ(chat.calls, 1);
}

TEST(LlmParser, UnreachableEndpointThrows) {
  LlmConfig cfg;
  cfg.base_url = "http://127.0.0.1:1";
  cfg.max_retries = 0;
  cfg.timeout_s = 1.0;
  EXPECT_THROW(parse_llm("bank", cfg), LlmTransportError);
}

TEST(LlmParser, CotUsesTheReasoningPrompt) {
  ChatMock chat;
  chat.reply = R"({"pois": [], "time_limit": "None", "dependencies": [],
                   "quality_weight": 0.5, "distance_weight": 0.5})";
  auto cfg = chat.config();
  cfg.cot = true;
  parse_llm("anything", cfg);
  EXPECT_EQ(chat.last_request["messages"][0]["content"].get<std::string>(),
            std::string(prompts::parser_system_cot()));
}
