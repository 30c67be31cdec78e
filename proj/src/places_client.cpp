#include <algorithm>
#include <cstdlib>
#include <set>

#include "http_util.hpp"
#include "llmap/map_provider.hpp"

namespace llmap {

namespace {

// Places encodes days as 0 = Sunday.
Weekday places_day(int d) { return static_cast<Weekday>((d + 6) % 7); }

int places_time(const std::string& hhmm) {
  if (hhmm.size() != 4) {
    throw std::invalid_argument("bad Places time '" + hhmm + "'");
  }
  return std::stoi(hhmm.substr(0, 2)) * 60 + std::stoi(hhmm.substr(2, 2));
}

std::vector<OpeningInterval> places_periods(const nlohmann::json& periods) {
  std::vector<OpeningInterval> out;
  for (const auto& p : periods) {
    const auto& open = p.at("open");
    const Weekday open_day = places_day(open.at("day").get<int>());
    const int open_min = places_time(open.at("time").get<std::string>());
    if (!p.contains("close")) {
      // Open around the clock.
      for (int d = 0; d < 7; ++d) {
        out.push_back({static_cast<Weekday>(d), 0, kMinutesPerDay});
      }
      continue;
    }
    const auto& close = p["close"];
    const Weekday close_day = places_day(close.at("day").get<int>());
    const int close_min = places_time(close.at("time").get<std::string>());
    if (close_day == open_day && close_min > open_min) {
      out.push_back({open_day, open_min, close_min});
    } else {
      // Past midnight: split at 24:00.
      out.push_back({open_day, open_min, kMinutesPerDay});
      if (close_min > 0) {
        out.push_back({close_day, 0, close_min});
      }
    }
  }
  // Merge touching intervals so adjacent day splits do not overlap.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::pair(a.day, a.open_min) < std::pair(b.day, b.open_min);
  });
  std::vector<OpeningInterval> merged;
  for (const auto& iv : out) {
    if (!merged.empty() && merged.back().day == iv.day && merged.back().close_min >= iv.open_min) {
      merged.back().close_min = std::max(merged.back().close_min, iv.close_min);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

std::string places_type_param(const std::string& poi_type) {
  std::string out = poi_type;
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

}  // namespace

std::optional<PlacesEndpoint> PlacesEndpoint::from_env() {
  const char* base = std::getenv("LLMAP_PLACES_BASE_URL");
  if (base == nullptr || *base == '\0') {
    return std::nullopt;
  }
  const char* key = std::getenv("LLMAP_PLACES_API_KEY");
  return PlacesEndpoint{base, key ? key : ""};
}

RawPoi import_places_result(const nlohmann::json& result, const std::string& poi_type) {
  RawPoi raw;
  raw.poi_type = poi_type;
  if (result.contains("place_id") && result["place_id"].is_string()) {
    raw.id = result["place_id"].get<std::string>();
  }
  if (result.contains("rating") && result["rating"].is_number()) {
    raw.rating = result["rating"].get<double>();
  }
  if (result.contains("user_ratings_total") && result["user_ratings_total"].is_number_integer()) {
    raw.review_count = result["user_ratings_total"].get<std::int64_t>();
  }
  if (result.contains("geometry")) {
    const auto& loc = result["geometry"].value("location", nlohmann::json::object());
    if (loc.contains("lat") && loc.contains("lng")) {
      raw.lat = loc["lat"].get<double>();
      raw.lon = loc["lng"].get<double>();
    }
  }
  if (result.contains("opening_hours") && result["opening_hours"].contains("periods")) {
    auto periods = places_periods(result["opening_hours"]["periods"]);
    if (!periods.empty()) {
      raw.opening = std::move(periods);
    }
  }
  return raw;
}

PoiDataset fetch_live(const PlacesEndpoint& endpoint, const ScenarioInfo& scenario,
                      const std::vector<std::string>& types, int page_limit) {
  const auto url = detail::split_url(endpoint.base_url);
  auto client = detail::make_client(url.origin, 30.0);

  PoiDataset ds;
  ds.provenance = Provenance::live;
  ds.scenario = scenario;
  std::set<std::string> seen;

  for (const auto& type : types) {
    std::string page_token;
    for (int page = 0; page < page_limit; ++page) {
      httplib::Params params = {
          {"location", std::to_string(scenario.end.lat) + "," + std::to_string(scenario.end.lon)},
          {"radius", std::to_string(scenario.search_radius_m)},
          {"type", places_type_param(type)},
          {"key", endpoint.api_key}};
      if (!page_token.empty()) {
        params.emplace("pagetoken", page_token);
      }
      auto res = client->Get(url.path_prefix + "/nearbysearch/json", params, httplib::Headers{});
      if (!res) {
        throw LiveFetchError("places request failed: " + httplib::to_string(res.error()), 0);
      }
      if (res->status != 200) {
        throw LiveFetchError("places endpoint returned HTTP " + std::to_string(res->status),
                             res->status);
      }
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw LiveFetchError(std::string("places reply is not JSON: ") + e.what(), res->status);
      }
      for (const auto& r : body.value("results", nlohmann::json::array())) {
        Poi poi = apply_defaults(import_places_result(r, type));
        if (seen.insert(poi.id).second) {
          ds.pois.push_back(std::move(poi));
        }
      }
      page_token = body.value("next_page_token", std::string{});
      if (page_token.empty()) {
        break;
      }
    }
  }
  check_dataset(ds);
  return ds;
}

}  // namespace llmap
