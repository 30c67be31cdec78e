#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "llmap/core_model.hpp"

namespace llmap {

enum class Repair {
  defaulted_all,
  renormalized_weights,
  clamped_weight,
  dropped_unknown_key,
  dropped_invalid_dependency,
  defaulted_field,
  dropped_duplicate_poi,
};

std::string_view to_string(Repair r);

enum class ParserKind { rule, llm };

std::string_view to_string(ParserKind k);

struct ParseOutcome {
  Intent intent;
  std::optional<std::string> raw_model_text;
  std::vector<Repair> repairs;  // each tag at most once, in first-seen order
  ParserKind parser_kind = ParserKind::rule;

  bool has(Repair r) const;
};

/// The all-default intent used when nothing usable was extracted.
Intent default_intent();

/// Parses "19:00", "7 pm", "7:30pm", "noon", "midnight" and similar into a
/// wall-clock time. Midnight maps to 24:00.
std::optional<TimeOfDay> parse_time_expression(std::string_view text);

/// Deterministic grammar parser. Never throws.
ParseOutcome parse_rule(std::string_view instruction);

struct RepairResult {
  Intent intent;
  std::vector<Repair> repairs;
};

/// Coerces loosely typed model output into a valid Intent. Never throws.
RepairResult repair_intent(const nlohmann::json& raw);

/// First balanced {...} in `text` that parses as JSON.
std::optional<nlohmann::json> extract_first_json(std::string_view text);

struct LlmConfig {
  std::string base_url;
  std::string api_key;
  std::string model;
  bool cot = false;
  double timeout_s = 30.0;
  int max_retries = 2;

  /// Reads LLMAP_LLM_BASE_URL, LLMAP_LLM_API_KEY, LLMAP_LLM_MODEL; nullopt
  /// when the base URL is unset.
  static std::optional<LlmConfig> from_env();
};

/// Transport failure, timeout, or an unusable response envelope.
class LlmTransportError : public std::runtime_error {
 public:
  LlmTransportError(const std::string& what, int http_status)
      : std::runtime_error(what), http_status_(http_status) {}
  int http_status() const { return http_status_; }

 private:
  int http_status_;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

/// One chat-completions round trip; returns the first choice's content.
/// Retries transport errors and 5xx replies up to cfg.max_retries times.
std::string chat_complete(const LlmConfig& cfg, const std::vector<ChatMessage>& messages);

/// Prompts the model with the parser templates and repairs its answer.
/// Throws LlmTransportError; a reply without JSON yields defaulted_all.
ParseOutcome parse_llm(std::string_view instruction, const LlmConfig& cfg);

}  // namespace llmap
