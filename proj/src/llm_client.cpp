#include <cstdlib>

#include "http_util.hpp"
#include "llmap/intent_parser.hpp"

namespace llmap {

std::optional<LlmConfig> LlmConfig::from_env() {
  const char* base = std::getenv("LLMAP_LLM_BASE_URL");
  if (base == nullptr || *base == '\0') {
    return std::nullopt;
  }
  LlmConfig cfg;
  cfg.base_url = base;
  if (const char* key = std::getenv("LLMAP_LLM_API_KEY")) {
    cfg.api_key = key;
  }
  if (const char* model = std::getenv("LLMAP_LLM_MODEL")) {
    cfg.model = model;
  }
  return cfg;
}

std::string chat_complete(const LlmConfig& cfg, const std::vector<ChatMessage>& messages) {
  if (cfg.timeout_s <= 0.0) {
    throw std::invalid_argument("LLM timeout must be positive");
  }
  const auto url = detail::split_url(cfg.base_url);
  auto client = detail::make_client(url.origin, cfg.timeout_s);

  nlohmann::json body = {{"model", cfg.model}, {"messages", nlohmann::json::array()}};
  for (const auto& m : messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  httplib::Headers headers;
  if (!cfg.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + cfg.api_key);
  }
  const std::string payload = body.dump();
  const std::string path = url.path_prefix + "/chat/completions";

  std::string last_error;
  int last_status = 0;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    auto res = client->Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "LLM request failed: " + httplib::to_string(res.error());
      last_status = 0;
      continue;
    }
    if (res->status >= 500) {
      last_error = "LLM endpoint returned HTTP " + std::to_string(res->status);
      last_status = res->status;
      continue;
    }
    if (res->status != 200) {
      throw LlmTransportError("LLM endpoint returned HTTP " + std::to_string(res->status),
                              res->status);
    }
    const auto reply = nlohmann::json::parse(res->body, nullptr, false);
    try {
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw LlmTransportError("LLM reply has no choices[0].message.content", res->status);
    }
  }
  throw LlmTransportError(last_error, last_status);
}

}  // namespace llmap
