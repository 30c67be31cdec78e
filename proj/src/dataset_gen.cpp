#include "llmap/dataset_gen.hpp"

#include <fstream>
#include <sstream>

#include "llmap/json_io.hpp"
#include "llmap/prompts.hpp"

namespace llmap {

namespace {

template <std::size_t N>
const char* pick(Rng& rng, const char* const (&bank)[N]) {
  return bank[rng.uniform_int(0, static_cast<std::int64_t>(N) - 1)];
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string poi_list(const std::vector<std::string>& pois) {
  std::string out = "the " + pois.front();
  for (std::size_t i = 1; i < pois.size(); ++i) {
    if (i + 1 < pois.size()) {
      out += ", " + pois[i];
    } else {
      out += (pois.size() > 2 ? ", and " : " and ") + pois[i];
    }
  }
  return out;
}

const char* const kPoiSentences[] = {
    "Today, let's plan to visit {list}.",
    "I need to stop by {list} today.",
    "My errands for today are {list}.",
    "Today I have to go to {list}.",
};

const char* const kDeadlineSentences[] = {
    "Please be home by {time}.",
    "I need to be back no later than {time}.",
    "I have to return home before {time}.",
    "Make sure I am home by {time}.",
};

const char* const kQualitySentences[] = {
    "Prioritize visiting POIs with high ratings as they are more important today.",
    "I want the best rated places, even if the trip takes longer.",
    "Quality matters most to me today, so pick well reviewed places.",
};

const char* const kUrgencySentences[] = {
    "I am in a hurry, so keep the route as short as possible.",
    "Please make the trip quick and efficient.",
    "Time is tight today, so minimize travel between stops.",
};

const char* const kBalancedSentences[] = {
    "I would like well rated places but an efficient route matters too.",
    "Please balance place quality against travel time.",
    "Good ratings and a short route are equally important to me.",
};

const char* const kDependencySentences[] = {
    "Visit the {a} before the {b}.",
    "Go to the {a} first, then the {b}.",
    "Stop at the {b} only after the {a}.",
    "Make sure the {a} comes ahead of the {b}.",
    "Start at the {a} before heading to the {b}.",
};

std::string format_weight(double w) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.1f", w);
  return buf;
}

}  // namespace

Intent gen_label(Rng& rng, const LabelConfig& cfg) {
  Intent label;
  const auto k = rng.uniform_int(cfg.min_types, cfg.max_types);
  std::vector<std::string> types = hipp_taxonomy();
  rng.shuffle(types);
  label.pois.assign(types.begin(), types.begin() + k);

  if (rng.bernoulli(cfg.time_limit_probability)) {
    const auto hour = rng.uniform_int(cfg.first_deadline_hour, cfg.last_deadline_hour);
    label.time_limit = TimeOfDay{static_cast<int>(hour) * 60};
  }
  for (std::size_t i = 0; i + 1 < label.pois.size(); ++i) {
    if (rng.bernoulli(cfg.dependency_probability)) {
      label.dependencies.push_back({label.pois[i], label.pois[i + 1]});
    }
  }
  const auto tenths = rng.uniform_int(0, 10);
  label.quality_weight = static_cast<double>(tenths) / 10.0;
  label.distance_weight = static_cast<double>(10 - tenths) / 10.0;
  return label;
}

std::string gen_instruction(const Intent& label, Rng& rng) {
  std::vector<std::string> sentences;
  if (!label.pois.empty()) {
    sentences.push_back(replace_all(pick(rng, kPoiSentences), "{list}", poi_list(label.pois)));
  }
  if (label.time_limit) {
    sentences.push_back(
        replace_all(pick(rng, kDeadlineSentences), "{time}", label.time_limit->to_string()));
  }
  if (label.quality_weight > 0.5) {
    sentences.push_back(pick(rng, kQualitySentences));
  } else if (label.distance_weight > 0.5) {
    sentences.push_back(pick(rng, kUrgencySentences));
  } else {
    sentences.push_back(pick(rng, kBalancedSentences));
  }
  for (const auto& d : label.dependencies) {
    std::string s = pick(rng, kDependencySentences);
    s = replace_all(s, "{a}", d.before);
    sentences.push_back(replace_all(s, "{b}", d.after));
  }
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) {
      out += ' ';
    }
    out += s;
  }
  return out;
}

std::string gen_instruction_llm(const Intent& label, const LlmConfig& cfg) {
  const auto wire = intent_to_json(label);
  const std::string user = prompts::fill(
      prompts::instruction_user(),
      {{"pois", wire["pois"].dump()},
       {"time_limit", wire["time_limit"].get<std::string>()},
       {"quality_weight", format_weight(label.quality_weight)},
       {"distance_weight", format_weight(label.distance_weight)},
       {"dependencies", wire["dependencies"].dump()}});
  return chat_complete(cfg, {{"system", std::string(prompts::instruction_system())},
                             {"user", user}});
}

HippSample gen_sample(std::int64_t id, std::uint64_t seed, const ScenarioInfo& scenario,
                      const LabelConfig& cfg) {
  Rng rng(seed);
  HippSample s;
  s.id = id;
  s.seed = seed;
  s.scenario = scenario;
  s.label = gen_label(rng, cfg);
  s.instruction = gen_instruction(s.label, rng);
  return s;
}

std::vector<HippSample> gen_dataset(int n, std::uint64_t seed, const ScenarioInfo& scenario,
                                    const LabelConfig& cfg) {
  if (n < 1) {
    throw std::invalid_argument("dataset size must be at least 1");
  }
  std::vector<HippSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.push_back(gen_sample(i, seed + static_cast<std::uint64_t>(i), scenario, cfg));
  }
  return out;
}

nlohmann::json sample_to_json(const HippSample& s) {
  return {{"id", s.id},
          {"seed", s.seed},
          {"scenario", scenario_to_json(s.scenario)},
          {"label", intent_to_json(s.label)},
          {"instruction", s.instruction}};
}

HippSample sample_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("sample must be a JSON object");
  }
  for (const char* key : {"id", "seed", "scenario", "label", "instruction"}) {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("sample is missing '") + key + "'");
    }
  }
  if (!j["id"].is_number_integer() || !j["seed"].is_number_unsigned() ||
      !j["instruction"].is_string()) {
    throw std::invalid_argument("sample id, seed or instruction has the wrong type");
  }
  HippSample s;
  s.id = j["id"].get<std::int64_t>();
  s.seed = j["seed"].get<std::uint64_t>();
  s.instruction = j["instruction"].get<std::string>();
  if (s.instruction.empty()) {
    throw std::invalid_argument("sample instruction is empty");
  }
  s.scenario = scenario_from_json(j["scenario"]);
  s.label = intent_from_json(j["label"]);
  return s;
}

std::string to_jsonl(const std::vector<HippSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += sample_to_json(s).dump();
    out += '\n';
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<HippSample>& samples) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  f << to_jsonl(samples);
  if (!f) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::vector<HippSample> parse_jsonl(std::string_view text) {
  std::vector<HippSample> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw DatasetError("not valid JSON", line_no);
    }
    try {
      out.push_back(sample_from_json(j));
    } catch (const std::exception& e) {
      throw DatasetError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<HippSample> read_jsonl(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_jsonl(ss.str());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace llmap
