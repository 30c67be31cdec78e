#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "llmap/core_model.hpp"
#include "llmap/evaluator.hpp"
#include "llmap/intent_parser.hpp"
#include "llmap/msgs_solver.hpp"

namespace llmap {

struct Turn {
  std::string role;  // "user" or "assistant"
  std::string text;
};

struct Session {
  std::string id;
  std::vector<Turn> history;
  Intent current_intent;
  std::string dataset_ref;
  std::optional<SolverResult> last_result;
  std::optional<RouteMetrics> last_metrics;
};

/// Folds a correction into the session intent. The correction was parsed on
/// its own; its non-default fields overwrite `current`. Sentences with a
/// removal cue ("remove", "skip", "drop", ...) delete the POI types they
/// mention. "also"/"add" extends the POI list instead of replacing it, and a
/// parse naming only POIs already present keeps the current list.
Intent merge_correction(const Intent& current, const ParseOutcome& update, std::string_view text);

class SessionNotFound : public std::out_of_range {
 public:
  explicit SessionNotFound(const std::string& id) : std::out_of_range("no session '" + id + "'") {}
};

/// In-memory session map. Calls on the same session are serialized; distinct
/// sessions proceed concurrently.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> snapshot_path = std::nullopt);

  std::string create(const std::string& dataset_ref);

  /// Runs fn with exclusive access to the session. Throws SessionNotFound.
  template <typename Fn>
  auto with_session(const std::string& id, Fn&& fn) -> decltype(fn(std::declval<Session&>())) {
    auto entry = find(id);
    if constexpr (std::is_void_v<decltype(fn(entry->session))>) {
      {
        std::lock_guard<std::mutex> lock(entry->mutex);
        fn(entry->session);
      }
      persist();
    } else {
      std::unique_lock<std::mutex> lock(entry->mutex);
      auto result = fn(entry->session);
      lock.unlock();
      persist();
      return result;
    }
  }

  std::size_t size() const;

  nlohmann::json snapshot() const;
  void restore(const nlohmann::json& snapshot);

 private:
  struct Entry {
    std::mutex mutex;
    Session session;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  void persist() const;

  mutable std::mutex map_mutex_;
  mutable std::mutex persist_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::optional<std::filesystem::path> snapshot_path_;
  std::uint64_t next_ = 1;
};

nlohmann::json session_to_json(const Session& s);

}  // namespace llmap
