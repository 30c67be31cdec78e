#include "llmap/intent_parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <set>
#include <utility>

#include "llmap/prompts.hpp"

namespace llmap {

namespace {

// Phrase -> canonical POI type. Multi-word phrases win over their parts.
const std::vector<std::pair<std::string, std::string>>& poi_vocabulary() {
  static const std::vector<std::pair<std::string, std::string>> kVocab = {
      {"shopping mall", "shopping mall"},   {"shopping malls", "shopping mall"},
      {"shopping center", "shopping mall"}, {"shopping centre", "shopping mall"},
      {"shopping centers", "shopping mall"}, {"mall", "shopping mall"},
      {"malls", "shopping mall"},           {"supermarket", "supermarket"},
      {"supermarkets", "supermarket"},      {"grocery store", "supermarket"},
      {"grocery stores", "supermarket"},    {"grocery", "supermarket"},
      {"groceries", "supermarket"},         {"pharmacy", "pharmacy"},
      {"pharmacies", "pharmacy"},           {"drugstore", "pharmacy"},
      {"drugstores", "pharmacy"},           {"drug store", "pharmacy"},
      {"chemist", "pharmacy"},              {"bank", "bank"},
      {"banks", "bank"},                    {"library", "library"},
      {"libraries", "library"},             {"museum", "museum"},
      {"museums", "museum"},                {"park", "park"},
      {"parks", "park"},                    {"post office", "post office"},
      {"gas station", "gas station"},       {"cafe", "cafe"},
      {"coffee shop", "cafe"},              {"restaurant", "restaurant"},
      {"gym", "gym"},                       {"hospital", "hospital"},
      {"bakery", "bakery"},                 {"bookstore", "bookstore"},
      {"book store", "bookstore"},
  };
  return kVocab;
}

const std::vector<std::string> kQualityCues = {
    "rating", "ratings", "rated", "quality", "best", "reviews", "reviewed", "reputation",
    "top notch", "excellent", "finest"};
const std::vector<std::string> kUrgencyCues = {
    "quick", "quickly", "fast", "hurry", "rush", "rushed", "efficient", "efficiency",
    "efficiently", "short", "shortest", "save time", "saving time", "minimize travel",
    "as soon as possible", "asap", "nearby", "close by", "less driving"};
const std::vector<std::string> kBalanceCues = {"balance", "balanced", "equally", "evenly"};

const std::vector<std::string> kForwardCues = {"before", "prior to", "ahead of", "then",
                                               "followed by"};
const std::vector<std::string> kBackwardCues = {"after"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
    ++a;
  }
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
    --b;
  }
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '\'') {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) {
    words.push_back(std::move(cur));
  }
  return words;
}

// Number of words matched by `phrase` at position i, 0 if none.
std::size_t match_at(const std::vector<std::string>& words, std::size_t i,
                     const std::string& phrase) {
  const auto parts = words_of(phrase);
  if (i + parts.size() > words.size()) {
    return 0;
  }
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (words[i + k] != parts[k]) {
      return 0;
    }
  }
  return parts.size();
}

bool contains_any(const std::vector<std::string>& words, const std::vector<std::string>& cues) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (const auto& c : cues) {
      if (match_at(words, i, c) > 0) {
        return true;
      }
    }
  }
  return false;
}

enum class TokenKind { poi, forward, backward };

struct Token {
  TokenKind kind;
  std::string poi_type;
};

bool starts_time(const std::vector<std::string>& words, std::size_t i) {
  return i < words.size() && (std::isdigit(static_cast<unsigned char>(words[i][0])) ||
                              words[i] == "noon" || words[i] == "midnight");
}

// POI mentions and ordering cues of one sentence, in reading order.
std::vector<Token> tokenize(const std::vector<std::string>& words) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t best_len = 0;
    const std::string* best_type = nullptr;
    for (const auto& [phrase, type] : poi_vocabulary()) {
      const auto len = match_at(words, i, phrase);
      if (len > best_len) {
        best_len = len;
        best_type = &type;
      }
    }
    if (best_len > 0) {
      tokens.push_back({TokenKind::poi, *best_type});
      i += best_len;
      continue;
    }
    bool cue = false;
    for (const auto* group : {&kForwardCues, &kBackwardCues}) {
      for (const auto& c : *group) {
        const auto len = match_at(words, i, c);
        if (len > 0) {
          // "before 19:00" is a deadline, not an ordering.
          if (!starts_time(words, i + len)) {
            tokens.push_back(
                {group == &kForwardCues ? TokenKind::forward : TokenKind::backward, {}});
          }
          i += len;
          cue = true;
          break;
        }
      }
      if (cue) {
        break;
      }
    }
    if (!cue) {
      ++i;
    }
  }
  return tokens;
}

std::vector<Dependency> dependencies_of(const std::vector<Token>& tokens) {
  std::vector<Dependency> deps;
  auto nearest = [&](std::size_t from, int step) -> std::optional<std::size_t> {
    for (auto j = static_cast<long>(from) + step; j >= 0 && j < static_cast<long>(tokens.size());
         j += step) {
      if (tokens[j].kind == TokenKind::poi) {
        return static_cast<std::size_t>(j);
      }
    }
    return std::nullopt;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind == TokenKind::poi) {
      continue;
    }
    const auto left = nearest(i, -1);
    const auto right = nearest(i, +1);
    if (!right) {
      continue;
    }
    if (left) {
      const auto& a = tokens[*left].poi_type;
      const auto& b = tokens[*right].poi_type;
      if (tokens[i].kind == TokenKind::forward) {
        deps.push_back({a, b});
      } else {
        deps.push_back({b, a});
      }
    } else if (tokens[i].kind == TokenKind::backward) {
      // "After the bank, go to the library."
      const auto second = nearest(*right, +1);
      if (second) {
        deps.push_back({tokens[*right].poi_type, tokens[*second].poi_type});
      }
    }
  }
  return deps;
}

std::vector<std::string> sentences_of(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?' || c == ';' || c == '\n') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::optional<TimeOfDay> find_deadline(const std::string& text) {
  static const std::regex kDeadline(
      R"(\b(?:by|before|until|till|til|no later than|not later than)\s+(?:around\s+|about\s+)?)"
      R"((\d{1,2}:\d{2}\s*(?:am|pm|a\.m\.|p\.m\.)?|\d{1,2}\s*(?:am|pm|a\.m\.|p\.m\.)|noon|midnight))");
  std::smatch m;
  if (std::regex_search(text, m, kDeadline)) {
    return parse_time_expression(m[1].str());
  }
  return std::nullopt;
}

void add_repair(std::vector<Repair>& repairs, Repair r) {
  if (std::find(repairs.begin(), repairs.end(), r) == repairs.end()) {
    repairs.push_back(r);
  }
}

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) {
    v.push_back(x);
  }
}

}  // namespace

std::string_view to_string(Repair r) {
  switch (r) {
    case Repair::defaulted_all:
      return "defaulted_all";
    case Repair::renormalized_weights:
      return "renormalized_weights";
    case Repair::clamped_weight:
      return "clamped_weight";
    case Repair::dropped_unknown_key:
      return "dropped_unknown_key";
    case Repair::dropped_invalid_dependency:
      return "dropped_invalid_dependency";
    case Repair::defaulted_field:
      return "defaulted_field";
    case Repair::dropped_duplicate_poi:
      return "dropped_duplicate_poi";
  }
  return "unknown";
}

std::string_view to_string(ParserKind k) { return k == ParserKind::rule ? "rule" : "llm"; }

bool ParseOutcome::has(Repair r) const {
  return std::find(repairs.begin(), repairs.end(), r) != repairs.end();
}

Intent default_intent() { return Intent{}; }

std::optional<TimeOfDay> parse_time_expression(std::string_view text) {
  static const std::regex kTime(R"(^(\d{1,2})(?::(\d{2}))?\s*(am|pm|a\.m\.|p\.m\.)?$)");
  const std::string t = lower(trim(text));
  if (t == "noon") {
    return TimeOfDay{12 * 60};
  }
  if (t == "midnight") {
    return TimeOfDay{kMinutesPerDay};
  }
  std::smatch m;
  if (!std::regex_match(t, m, kTime)) {
    return std::nullopt;
  }
  int h = std::stoi(m[1].str());
  const int min = m[2].matched ? std::stoi(m[2].str()) : 0;
  if (min > 59) {
    return std::nullopt;
  }
  if (m[3].matched) {
    if (h < 1 || h > 12) {
      return std::nullopt;
    }
    const bool pm = m[3].str()[0] == 'p';
    if (h == 12) {
      h = pm ? 12 : (min == 0 ? 24 : 0);
    } else if (pm) {
      h += 12;
    }
  }
  if (h > 24 || (h == 24 && min != 0)) {
    return std::nullopt;
  }
  return TimeOfDay{h * 60 + min};
}

ParseOutcome parse_rule(std::string_view instruction) {
  ParseOutcome out;
  out.parser_kind = ParserKind::rule;
  const std::string text = lower(instruction);

  Intent& intent = out.intent;
  for (const auto& sentence : sentences_of(text)) {
    const auto tokens = tokenize(words_of(sentence));
    for (const auto& tok : tokens) {
      if (tok.kind == TokenKind::poi) {
        push_unique(intent.pois, tok.poi_type);
      }
    }
    for (const auto& d : dependencies_of(tokens)) {
      if (d.before != d.after) {
        push_unique(intent.dependencies, d);
      }
    }
  }
  intent.time_limit = find_deadline(text);

  const auto words = words_of(text);
  const bool quality = contains_any(words, kQualityCues);
  const bool urgency = contains_any(words, kUrgencyCues);
  const bool balance = contains_any(words, kBalanceCues);
  if (!balance && quality && !urgency) {
    intent.quality_weight = 0.7;
    intent.distance_weight = 0.3;
  } else if (!balance && urgency && !quality) {
    intent.quality_weight = 0.3;
    intent.distance_weight = 0.7;
  }

  const bool nothing = intent.pois.empty() && !intent.time_limit &&
                       intent.dependencies.empty() && !quality && !urgency && !balance;
  if (nothing) {
    intent = default_intent();
    out.repairs.push_back(Repair::defaulted_all);
  }
  return out;
}

RepairResult repair_intent(const nlohmann::json& raw) {
  static const std::set<std::string> kKeys = {"pois", "time_limit", "dependencies",
                                              "quality_weight", "distance_weight"};
  RepairResult out;
  auto& repairs = out.repairs;
  if (!raw.is_object()) {
    out.intent = default_intent();
    repairs.push_back(Repair::defaulted_all);
    return out;
  }
  bool any_known = false;
  for (const auto& [key, value] : raw.items()) {
    if (kKeys.count(key)) {
      any_known = true;
    } else {
      add_repair(repairs, Repair::dropped_unknown_key);
    }
  }
  if (!any_known) {
    out.intent = default_intent();
    repairs.insert(repairs.begin(), Repair::defaulted_all);
    return out;
  }

  Intent& intent = out.intent;

  if (!raw.contains("pois") || !raw["pois"].is_array()) {
    add_repair(repairs, Repair::defaulted_field);
  } else {
    for (const auto& p : raw["pois"]) {
      if (!p.is_string() || trim(p.get<std::string>()).empty()) {
        add_repair(repairs, Repair::defaulted_field);
        continue;
      }
      const std::string name = lower(trim(p.get<std::string>()));
      if (std::find(intent.pois.begin(), intent.pois.end(), name) != intent.pois.end()) {
        add_repair(repairs, Repair::dropped_duplicate_poi);
      } else {
        intent.pois.push_back(name);
      }
    }
  }

  if (!raw.contains("time_limit")) {
    add_repair(repairs, Repair::defaulted_field);
  } else {
    const auto& t = raw["time_limit"];
    if (t.is_string()) {
      const std::string s = lower(trim(t.get<std::string>()));
      if (!(s.empty() || s == "none" || s == "null")) {
        intent.time_limit = parse_time_expression(s);
        if (!intent.time_limit) {
          add_repair(repairs, Repair::defaulted_field);
        }
      }
    } else if (!t.is_null()) {
      add_repair(repairs, Repair::defaulted_field);
    }
  }

  if (!raw.contains("dependencies") || !raw["dependencies"].is_array()) {
    add_repair(repairs, Repair::defaulted_field);
  } else {
    for (const auto& d : raw["dependencies"]) {
      const bool shaped = d.is_array() && d.size() == 2 && d[0].is_string() && d[1].is_string();
      if (!shaped) {
        add_repair(repairs, Repair::dropped_invalid_dependency);
        continue;
      }
      Dependency dep{lower(trim(d[0].get<std::string>())), lower(trim(d[1].get<std::string>()))};
      const bool known = std::find(intent.pois.begin(), intent.pois.end(), dep.before) !=
                             intent.pois.end() &&
                         std::find(intent.pois.begin(), intent.pois.end(), dep.after) !=
                             intent.pois.end();
      const bool duplicate = std::find(intent.dependencies.begin(), intent.dependencies.end(),
                                       dep) != intent.dependencies.end();
      if (!known || dep.before == dep.after || duplicate) {
        add_repair(repairs, Repair::dropped_invalid_dependency);
        continue;
      }
      intent.dependencies.push_back(std::move(dep));
    }
  }

  auto weight = [&](const char* key) -> std::optional<double> {
    if (raw.contains(key) && raw[key].is_number()) {
      return raw[key].get<double>();
    }
    return std::nullopt;
  };
  auto q = weight("quality_weight");
  auto d = weight("distance_weight");
  if (!q || !d) {
    add_repair(repairs, Repair::defaulted_field);
    if (!q && !d) {
      q = 0.5;
      d = 0.5;
    } else if (!q) {
      d = std::clamp(*d, 0.0, 1.0);
      q = 1.0 - *d;
    } else {
      q = std::clamp(*q, 0.0, 1.0);
      d = 1.0 - *q;
    }
  }
  const double qc = std::clamp(*q, 0.0, 1.0);
  const double dc = std::clamp(*d, 0.0, 1.0);
  if (qc != *q || dc != *d) {
    add_repair(repairs, Repair::clamped_weight);
  }
  intent.quality_weight = qc;
  intent.distance_weight = dc;
  const double sum = qc + dc;
  if (sum == 0.0) {
    intent.quality_weight = 0.5;
    intent.distance_weight = 0.5;
    add_repair(repairs, Repair::renormalized_weights);
  } else if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    intent.quality_weight = qc / sum;
    intent.distance_weight = dc / sum;
    add_repair(repairs, Repair::renormalized_weights);
  }
  return out;
}

std::optional<nlohmann::json> extract_first_json(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        auto parsed = nlohmann::json::parse(text.substr(start, i - start + 1), nullptr, false);
        if (!parsed.is_discarded()) {
          return parsed;
        }
        break;
      }
    }
  }
  return std::nullopt;
}

ParseOutcome parse_llm(std::string_view instruction, const LlmConfig& cfg) {
  const std::string inst(instruction);
  std::vector<ChatMessage> messages;
  if (cfg.cot) {
    messages = {{"system", std::string(prompts::parser_system_cot())},
                {"user", prompts::fill(prompts::parser_user_cot(), {{"instruction", inst}})}};
  } else {
    messages = {{"system", std::string(prompts::parser_system())},
                {"user", prompts::fill(prompts::parser_user(), {{"instruction", inst}})}};
  }
  ParseOutcome out;
  out.parser_kind = ParserKind::llm;
  out.raw_model_text = chat_complete(cfg, messages);
  const auto json = extract_first_json(*out.raw_model_text);
  if (!json) {
    out.intent = default_intent();
    out.repairs.push_back(Repair::defaulted_all);
    return out;
  }
  auto repaired = repair_intent(*json);
  out.intent = std::move(repaired.intent);
  out.repairs = std::move(repaired.repairs);
  return out;
}

}  // namespace llmap
