#include "llmap/json_io.hpp"

#include <stdexcept>

namespace llmap {

json latlon_to_json(const LatLon& p) { return json::array({p.lat, p.lon}); }

LatLon latlon_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("expected [lat, lon]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json scenario_to_json(const ScenarioInfo& s) {
  return {{"name", s.name},
          {"start", latlon_to_json(s.start)},
          {"end", latlon_to_json(s.end)},
          {"radius_m", s.search_radius_m}};
}

ScenarioInfo scenario_from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("scenario must be an object");
  }
  ScenarioInfo s;
  s.name = j.value("name", std::string{});
  s.start = latlon_from_json(j.at("start"));
  s.end = latlon_from_json(j.at("end"));
  s.search_radius_m = j.value("radius_m", 5000);
  if (s.search_radius_m <= 0) {
    throw std::invalid_argument("scenario radius_m must be positive");
  }
  return s;
}

json intent_to_json(const Intent& intent) {
  json deps = json::array();
  for (const auto& d : intent.dependencies) {
    deps.push_back(json::array({d.before, d.after}));
  }
  return {{"pois", intent.pois},
          {"time_limit", intent.time_limit ? intent.time_limit->to_string() : "None"},
          {"dependencies", deps},
          {"quality_weight", intent.quality_weight},
          {"distance_weight", intent.distance_weight}};
}

Intent intent_from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("intent must be a JSON object");
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "pois" && key != "time_limit" && key != "dependencies" &&
        key != "quality_weight" && key != "distance_weight") {
      throw std::invalid_argument("unexpected intent key '" + key + "'");
    }
  }
  Intent intent;
  intent.pois = j.at("pois").get<std::vector<std::string>>();
  const auto& tl = j.at("time_limit");
  if (tl.is_string() && tl.get<std::string>() != "None") {
    intent.time_limit = TimeOfDay::parse(tl.get<std::string>());
    if (!intent.time_limit) {
      throw std::invalid_argument("bad time_limit '" + tl.get<std::string>() + "'");
    }
  } else if (!tl.is_null() && !tl.is_string()) {
    throw std::invalid_argument("time_limit must be a string or null");
  }
  for (const auto& d : j.at("dependencies")) {
    if (!d.is_array() || d.size() != 2) {
      throw std::invalid_argument("dependency must be a [before, after] pair");
    }
    intent.dependencies.push_back({d[0].get<std::string>(), d[1].get<std::string>()});
  }
  intent.quality_weight = j.at("quality_weight").get<double>();
  intent.distance_weight = j.at("distance_weight").get<double>();
  if (!is_valid(intent)) {
    throw std::invalid_argument("intent violates invariants");
  }
  return intent;
}

json route_to_json(const Route& route) {
  json stops = json::array();
  for (std::size_t i = 0; i < route.stops.size(); ++i) {
    json s = {{"id", route.stops[i]}};
    if (i < route.arrivals.size()) {
      s["arrival"] = route.arrivals[i].to_string();
      s["arrival_min"] = route.arrivals[i].week_minutes;
    }
    if (i < route.departures.size()) {
      s["departure"] = route.departures[i].to_string();
      s["departure_min"] = route.departures[i].week_minutes;
    }
    stops.push_back(std::move(s));
  }
  return {{"stops", stops},
          {"total_length_km", route.total_length_km},
          {"finish_time", route.finish_time.to_string()},
          {"finish_min", route.finish_time.week_minutes},
          {"score", route.score},
          {"covered_types", route.covered_types}};
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::fixture:
      return "fixture";
    case Provenance::synthetic:
      return "synthetic";
    case Provenance::live:
      return "live";
  }
  return "unknown";
}

}  // namespace llmap
