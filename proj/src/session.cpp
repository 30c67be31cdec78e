#include "llmap/session.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <regex>
#include <set>

#include "llmap/json_io.hpp"

namespace llmap {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string> split_sentences(const std::string& text) {
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

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

Intent merge_correction(const Intent& current, const ParseOutcome& update, std::string_view text) {
  static const std::regex kRemove(
      R"(\b(remove|skip|drop|cancel|without|forget|no longer|don't need|do not need|dont need)\b)");
  static const std::regex kAdd(R"(\b(also|add|plus|too|as well|another)\b)");

  const std::string t = lower(text);
  std::vector<std::string> removed;
  for (const auto& sentence : split_sentences(t)) {
    if (std::regex_search(sentence, kRemove)) {
      for (const auto& p : parse_rule(sentence).intent.pois) {
        removed.push_back(p);
      }
    }
  }

  Intent merged = current;
  if (!update.has(Repair::defaulted_all)) {
    const Intent& u = update.intent;
    std::vector<std::string> fresh;
    for (const auto& p : u.pois) {
      if (!contains(removed, p)) {
        fresh.push_back(p);
      }
    }
    if (!fresh.empty()) {
      const bool additive = std::regex_search(t, kAdd);
      const bool subset = std::all_of(fresh.begin(), fresh.end(),
                                      [&](const auto& p) { return contains(current.pois, p); });
      if (additive) {
        for (const auto& p : fresh) {
          if (!contains(merged.pois, p)) {
            merged.pois.push_back(p);
          }
        }
      } else if (!subset) {
        merged.pois = fresh;
      }
    }
    if (u.time_limit) {
      merged.time_limit = u.time_limit;
    }
    if (!u.dependencies.empty()) {
      merged.dependencies = u.dependencies;
    }
    if (u.quality_weight != 0.5 || u.distance_weight != 0.5) {
      merged.quality_weight = u.quality_weight;
      merged.distance_weight = u.distance_weight;
    }
  }
  std::erase_if(merged.pois, [&](const auto& p) { return contains(removed, p); });
  // Re-run repair so dependencies on dropped types disappear.
  return repair_intent(intent_to_json(merged)).intent;
}

SessionStore::SessionStore(std::optional<std::filesystem::path> snapshot_path)
    : snapshot_path_(std::move(snapshot_path)) {
  if (snapshot_path_ && std::filesystem::exists(*snapshot_path_)) {
    std::ifstream f(*snapshot_path_);
    const auto j = nlohmann::json::parse(f, nullptr, false);
    if (j.is_discarded()) {
      throw std::runtime_error("session snapshot " + snapshot_path_->string() + " is not JSON");
    }
    restore(j);
  }
}

std::string SessionStore::create(const std::string& dataset_ref) {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  auto entry = std::make_shared<Entry>();
  std::string id;
  {
    std::lock_guard<std::mutex> lock(map_mutex_);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "s%llu-%012llx", static_cast<unsigned long long>(next_++),
                  static_cast<unsigned long long>(gen() & 0xffffffffffffULL));
    id = buf;
    entry->session.id = id;
    entry->session.dataset_ref = dataset_ref;
    sessions_.emplace(id, entry);
  }
  persist();
  return id;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(map_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw SessionNotFound(id);
  }
  return it->second;
}

std::size_t SessionStore::size() const {
  std::lock_guard<std::mutex> lock(map_mutex_);
  return sessions_.size();
}

nlohmann::json SessionStore::snapshot() const {
  std::vector<std::shared_ptr<Entry>> entries;
  nlohmann::json out;
  {
    std::lock_guard<std::mutex> lock(map_mutex_);
    out["next"] = next_;
    for (const auto& [id, e] : sessions_) {
      entries.push_back(e);
    }
  }
  out["sessions"] = nlohmann::json::array();
  for (const auto& e : entries) {
    std::lock_guard<std::mutex> lock(e->mutex);
    nlohmann::json s = {{"id", e->session.id},
                        {"dataset", e->session.dataset_ref},
                        {"intent", intent_to_json(e->session.current_intent)},
                        {"history", nlohmann::json::array()}};
    for (const auto& turn : e->session.history) {
      s["history"].push_back({{"role", turn.role}, {"text", turn.text}});
    }
    out["sessions"].push_back(std::move(s));
  }
  return out;
}

void SessionStore::restore(const nlohmann::json& snapshot) {
  std::lock_guard<std::mutex> lock(map_mutex_);
  sessions_.clear();
  next_ = snapshot.value("next", std::uint64_t{1});
  for (const auto& s : snapshot.at("sessions")) {
    auto entry = std::make_shared<Entry>();
    entry->session.id = s.at("id").get<std::string>();
    entry->session.dataset_ref = s.value("dataset", std::string{});
    entry->session.current_intent = intent_from_json(s.at("intent"));
    for (const auto& turn : s.at("history")) {
      entry->session.history.push_back(
          {turn.at("role").get<std::string>(), turn.at("text").get<std::string>()});
    }
    sessions_.emplace(entry->session.id, entry);
  }
}

void SessionStore::persist() const {
  if (!snapshot_path_) {
    return;
  }
  const auto j = snapshot();
  std::lock_guard<std::mutex> lock(persist_mutex_);
  const auto tmp = snapshot_path_->string() + ".tmp";
  {
    std::ofstream f(tmp);
    f << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, *snapshot_path_);
}

nlohmann::json session_to_json(const Session& s) {
  nlohmann::json j = {{"id", s.id},
                      {"dataset", s.dataset_ref},
                      {"intent", intent_to_json(s.current_intent)},
                      {"history", nlohmann::json::array()}};
  for (const auto& turn : s.history) {
    j["history"].push_back({{"role", turn.role}, {"text", turn.text}});
  }
  if (s.last_result) {
    j["last_route"] = route_to_json(s.last_result->route);
    j["last_status"] = s.last_result->status == SolveStatus::found ? "found" : "fallback";
  }
  if (s.last_metrics) {
    j["last_metrics"] = route_metrics_to_json(*s.last_metrics);
  }
  return j;
}

}  // namespace llmap
