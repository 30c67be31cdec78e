#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <set>

#include "llmap/dataset_gen.hpp"
#include "llmap/evaluator.hpp"

using namespace llmap;

namespace {

ScenarioInfo scenario() { return default_synth_city(0).scenario; }

// Frozen from `llmap gen --synth-seed 0 --n 1000 --seed 7` and cross-checked
// with an independent FNV-1a implementation over the written file.
constexpr std::uint64_t kChecksumN1000Seed7 = 0xe1498237a83f5b63ULL;

}  // namespace

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Dataset, FrozenChecksum) {
  const auto samples = gen_dataset(1000, 7, scenario());
  EXPECT_EQ(fnv1a64(to_jsonl(samples)), kChecksumN1000Seed7);
}

TEST(Dataset, SameSeedSameBytes) {
  EXPECT_EQ(to_jsonl(gen_dataset(50, 3, scenario())), to_jsonl(gen_dataset(50, 3, scenario())));
  EXPECT_NE(to_jsonl(gen_dataset(50, 3, scenario())), to_jsonl(gen_dataset(50, 4, scenario())));
}

TEST(Dataset, SampleIUsesSeedPlusI) {
  const auto samples = gen_dataset(10, 100, scenario());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(samples[i].id, static_cast<std::int64_t>(i));
    EXPECT_EQ(samples[i].seed, 100 + i);
    const auto alone = gen_sample(static_cast<std::int64_t>(i), 100 + i, scenario());
    EXPECT_EQ(alone.label, samples[i].label);
    EXPECT_EQ(alone.instruction, samples[i].instruction);
  }
  EXPECT_THROW(gen_dataset(0, 1, scenario()), std::invalid_argument);
}

TEST(Labels, AreValidAndOnTheGrid) {
  Rng rng(42);
  for (int i = 0; i < 2000; ++i) {
    const Intent label = gen_label(rng);
    ASSERT_TRUE(is_valid(label));
    EXPECT_GE(label.pois.size(), 1u);
    EXPECT_LE(label.pois.size(), 5u);
    EXPECT_EQ(label.quality_weight + label.distance_weight, 1.0);
    const double tenths = label.quality_weight * 10.0;
    EXPECT_EQ(tenths, std::round(tenths));
    if (label.time_limit) {
      EXPECT_EQ(label.time_limit->minutes % 60, 0);
      EXPECT_GE(label.time_limit->minutes, 17 * 60);
      EXPECT_LE(label.time_limit->minutes, 23 * 60);
    }
    for (const auto& d : label.dependencies) {
      const auto a = std::find(label.pois.begin(), label.pois.end(), d.before);
      const auto b = std::find(label.pois.begin(), label.pois.end(), d.after);
      EXPECT_EQ(b - a, 1);
    }
  }
}

TEST(Labels, EveryTypeAndHourAppears) {
  Rng rng(5);
  std::set<std::string> types;
  std::set<int> hours;
  std::map<std::size_t, int> sizes;
  for (int i = 0; i < 5000; ++i) {
    const Intent label = gen_label(rng);
    types.insert(label.pois.begin(), label.pois.end());
    ++sizes[label.pois.size()];
    if (label.time_limit) {
      hours.insert(label.time_limit->minutes / 60);
    }
  }
  EXPECT_EQ(types.size(), 5u);
  EXPECT_EQ(hours.size(), 7u);
  EXPECT_EQ(sizes.size(), 5u);
}

TEST(Instructions, NoLimitMeansNoDeadlineSentence) {
  Intent label{{"bank", "pharmacy"}, std::nullopt, {}, 0.5, 0.5};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto text = gen_instruction(label, rng);
    EXPECT_EQ(text.find("home"), std::string::npos) << text;
    EXPECT_EQ(text.find("later than"), std::string::npos) << text;
    EXPECT_FALSE(parse_rule(text).intent.time_limit) << text;
  }
}

TEST(Instructions, ListsEveryPoi) {
  Rng rng(1);
  const Intent label{{"bank", "library", "supermarket", "shopping mall"}, TimeOfDay{19 * 60},
                     {{"bank", "library"}}, 0.9, 0.1};
  const auto text = gen_instruction(label, rng);
  EXPECT_NE(text.find("the bank, library, supermarket, and shopping mall"), std::string::npos)
      << text;
  EXPECT_NE(text.find("19:00"), std::string::npos);
}

TEST(Instructions, RuleParserRecoversTheLabel) {
  const auto samples = gen_dataset(300, 11, scenario());
  for (const auto& s : samples) {
    const auto parsed = parse_rule(s.instruction).intent;
    EXPECT_EQ(parsed.pois, s.label.pois) << s.instruction;
    EXPECT_EQ(parsed.time_limit, s.label.time_limit) << s.instruction;
    EXPECT_EQ(parsed.dependencies, s.label.dependencies) << s.instruction;
    EXPECT_GE(weight_similarity(s.label, parsed), 0.7 - 1e-12) << s.instruction;
  }
}

TEST(Jsonl, RoundTripsThroughAFile) {
  const auto samples = gen_dataset(25, 9, scenario());
  const auto path = std::filesystem::temp_directory_path() / "llmap_roundtrip.jsonl";
  write_jsonl(path, samples);
  const auto back = read_jsonl(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].id, samples[i].id);
    EXPECT_EQ(back[i].seed, samples[i].seed);
    EXPECT_EQ(back[i].label, samples[i].label);
    EXPECT_EQ(back[i].instruction, samples[i].instruction);
    EXPECT_EQ(back[i].scenario, samples[i].scenario);
  }
  EXPECT_EQ(to_jsonl(back), to_jsonl(samples));
}

TEST(Jsonl, ErrorsNameTheLine) {
  auto text = to_jsonl(gen_dataset(3, 1, scenario()));
  text += "\n{\"id\": 3}\n";
  try {
    parse_jsonl(text);
    FAIL() << "expected DatasetError";
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(std::string(e.what()).rfind("line 5: ", 0), 0u);
  }
  try {
    parse_jsonl("{not json\n");
    FAIL() << "expected DatasetError";
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Jsonl, RejectsSchemaViolations) {
  const auto good = sample_to_json(gen_sample(0, 1, scenario()));
  auto bad_seed = good;
  bad_seed["seed"] = -1;
  EXPECT_THROW(sample_from_json(bad_seed), std::invalid_argument);
  auto bad_label = good;
  bad_label["label"]["quality_weight"] = 5.0;
  EXPECT_THROW(sample_from_json(bad_label), std::invalid_argument);
  auto empty_text = good;
  empty_text["instruction"] = "";
  EXPECT_THROW(sample_from_json(empty_text), std::invalid_argument);
  EXPECT_NO_THROW(sample_from_json(good));
}
