#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "llmap/core_model.hpp"
#include "llmap/intent_parser.hpp"
#include "llmap/map_provider.hpp"
#include "llmap/rng.hpp"

namespace llmap {

struct HippSample {
  std::int64_t id = 0;
  Intent label;
  std::string instruction;
  ScenarioInfo scenario;
  std::uint64_t seed = 0;
};

struct LabelConfig {
  int min_types = 1;
  int max_types = 5;
  double time_limit_probability = 0.3;
  int first_deadline_hour = 17;
  int last_deadline_hour = 23;
  /// Applied independently to every consecutive pair of sampled types.
  double dependency_probability = 0.3;
};

/// Draws a ground-truth intent: types from the HIPP taxonomy in random order,
/// an optional whole-hour deadline, consecutive-pair dependencies, and
/// weights on the 0.1 grid summing to one.
Intent gen_label(Rng& rng, const LabelConfig& cfg = {});

/// Four-sentence template instruction: the POIs, the deadline (omitted
/// without a limit), a preference phrase, one sentence per dependency.
std::string gen_instruction(const Intent& label, Rng& rng);

/// Asks a chat model to phrase the label using the instruction prompts.
std::string gen_instruction_llm(const Intent& label, const LlmConfig& cfg);

HippSample gen_sample(std::int64_t id, std::uint64_t seed, const ScenarioInfo& scenario,
                      const LabelConfig& cfg = {});

/// Sample i is generated from seed + i.
std::vector<HippSample> gen_dataset(int n, std::uint64_t seed, const ScenarioInfo& scenario,
                                    const LabelConfig& cfg = {});

nlohmann::json sample_to_json(const HippSample& s);
/// Throws std::invalid_argument on schema violations.
HippSample sample_from_json(const nlohmann::json& j);

std::string to_jsonl(const std::vector<HippSample>& samples);
void write_jsonl(const std::filesystem::path& path, const std::vector<HippSample>& samples);

class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<HippSample> parse_jsonl(std::string_view text);
std::vector<HippSample> read_jsonl(const std::filesystem::path& path);

/// 64-bit FNV-1a, used as the dataset determinism checksum.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace llmap
