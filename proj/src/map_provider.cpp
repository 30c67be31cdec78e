#include "llmap/map_provider.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "llmap/json_io.hpp"
#include "llmap/rng.hpp"

namespace llmap {

namespace {

std::vector<OpeningInterval> every_day(int open, int close) {
  std::vector<OpeningInterval> out;
  for (int d = 0; d < 7; ++d) {
    out.push_back({static_cast<Weekday>(d), open, close});
  }
  return out;
}

std::vector<OpeningInterval> weekdays_and_saturday(std::initializer_list<std::pair<int, int>> spans) {
  std::vector<OpeningInterval> out;
  for (int d = 0; d < 6; ++d) {
    for (const auto& [open, close] : spans) {
      out.push_back({static_cast<Weekday>(d), open, close});
    }
  }
  return out;
}

// Opening-hour shapes seen in real Places data.
std::vector<OpeningInterval> opening_template(int which) {
  switch (which) {
    case 0:
      return every_day(0, kMinutesPerDay);
    case 1:
      return every_day(9 * 60, 17 * 60);
    case 2:
      return every_day(10 * 60, 21 * 60);
    case 3:
      return weekdays_and_saturday({{9 * 60, 13 * 60 + 30}, {14 * 60, 19 * 60}});
    default:
      return weekdays_and_saturday({{8 * 60, 20 * 60}});
  }
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    out.push_back(c == ' ' ? '_' : c);
  }
  return out;
}

LatLon offset_km(LatLon origin, double north_km, double east_km) {
  const double dlat = north_km / kEarthRadiusKm * 180.0 / std::numbers::pi;
  const double dlon = east_km / (kEarthRadiusKm * std::cos(origin.lat * std::numbers::pi / 180.0)) *
                      180.0 / std::numbers::pi;
  return {origin.lat + dlat, origin.lon + dlon};
}

OpeningInterval opening_from_json(const json& j, std::size_t poi_index) {
  const auto where = "poi #" + std::to_string(poi_index) + ": ";
  if (!j.is_object()) {
    throw FixtureError(where + "opening entry must be an object");
  }
  const auto day = parse_weekday(j.value("day", std::string{}));
  const auto open = TimeOfDay::parse(j.value("open", std::string{}));
  const auto close = TimeOfDay::parse(j.value("close", std::string{}));
  if (!day || !open || !close) {
    throw FixtureError(where + "opening entry needs day, open and close (HH:MM)");
  }
  return {*day, open->minutes, close->minutes};
}

RawPoi raw_from_fixture(const json& j, std::size_t index) {
  if (!j.is_object()) {
    throw FixtureError("poi #" + std::to_string(index) + " is not an object");
  }
  RawPoi raw;
  try {
    if (j.contains("id")) raw.id = j["id"].get<std::string>();
    if (j.contains("type")) raw.poi_type = j["type"].get<std::string>();
    if (j.contains("rating") && !j["rating"].is_null()) raw.rating = j["rating"].get<double>();
    if (j.contains("review_count") && !j["review_count"].is_null()) {
      raw.review_count = j["review_count"].get<std::int64_t>();
    }
    if (j.contains("lat")) raw.lat = j["lat"].get<double>();
    if (j.contains("lon")) raw.lon = j["lon"].get<double>();
  } catch (const json::type_error& e) {
    throw FixtureError("poi #" + std::to_string(index) + ": " + e.what());
  }
  if (j.contains("opening") && j["opening"].is_array() && !j["opening"].empty()) {
    std::vector<OpeningInterval> intervals;
    for (const auto& o : j["opening"]) {
      intervals.push_back(opening_from_json(o, index));
    }
    raw.opening = std::move(intervals);
  }
  return raw;
}

}  // namespace

std::vector<OpeningInterval> standard_business_hours() { return every_day(9 * 60, 17 * 60); }

Poi apply_defaults(const RawPoi& raw) {
  if (!raw.id || raw.id->empty()) {
    throw FixtureError("record missing id");
  }
  if (!raw.poi_type || raw.poi_type->empty()) {
    throw FixtureError("record '" + *raw.id + "' missing type");
  }
  if (!raw.lat || !raw.lon) {
    throw FixtureError("record '" + *raw.id + "' missing coordinates");
  }
  Poi poi;
  poi.id = *raw.id;
  poi.poi_type = *raw.poi_type;
  poi.rating = raw.rating.value_or(1.0);
  poi.review_count = raw.review_count.value_or(1);
  poi.location = {*raw.lat, *raw.lon};
  try {
    poi.opening = raw.opening && !raw.opening->empty() ? normalize_opening(*raw.opening)
                                                       : standard_business_hours();
    validate(poi);
  } catch (const std::invalid_argument& e) {
    throw FixtureError(e.what());
  }
  return poi;
}

void check_dataset(const PoiDataset& dataset) {
  std::set<std::string> ids;
  for (const auto& p : dataset.pois) {
    validate(p);
    if (!ids.insert(p.id).second) {
      throw FixtureError("duplicate poi id '" + p.id + "'");
    }
  }
  if (dataset.scenario.search_radius_m <= 0) {
    throw FixtureError("scenario radius must be positive");
  }
}

PoiDataset parse_fixture(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FixtureError(std::string("fixture parse error: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || !doc.contains("pois") || !doc["pois"].is_array()) {
    throw FixtureError("fixture must be an object with a \"pois\" array");
  }
  PoiDataset ds;
  ds.provenance = Provenance::fixture;
  if (doc.contains("scenario")) {
    try {
      ds.scenario = scenario_from_json(doc["scenario"]);
    } catch (const std::exception& e) {
      throw FixtureError(std::string("bad scenario: ") + e.what());
    }
  }
  std::set<std::string> ids;
  std::size_t index = 0;
  for (const auto& rec : doc["pois"]) {
    Poi poi = apply_defaults(raw_from_fixture(rec, index++));
    if (!ids.insert(poi.id).second) {
      throw FixtureError("duplicate poi id '" + poi.id + "'");
    }
    ds.pois.push_back(std::move(poi));
  }
  check_dataset(ds);
  return ds;
}

PoiDataset load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FixtureError("cannot open fixture " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fixture(ss.str());
}

json fixture_to_json(const PoiDataset& dataset) {
  json pois = json::array();
  for (const auto& p : dataset.pois) {
    json opening = json::array();
    for (const auto& iv : p.opening) {
      opening.push_back({{"day", std::string(to_string(iv.day))},
                         {"open", TimeOfDay{iv.open_min}.to_string()},
                         {"close", TimeOfDay{iv.close_min}.to_string()}});
    }
    pois.push_back({{"id", p.id},
                    {"type", p.poi_type},
                    {"rating", p.rating},
                    {"review_count", p.review_count},
                    {"lat", p.location.lat},
                    {"lon", p.location.lon},
                    {"opening", opening}});
  }
  return {{"scenario", scenario_to_json(dataset.scenario)}, {"pois", pois}};
}

const std::vector<std::string>& hipp_taxonomy() {
  static const std::vector<std::string> types = {"shopping mall", "supermarket", "pharmacy",
                                                 "bank", "library"};
  return types;
}

PoiDataset synth_city(std::uint64_t seed, const std::vector<std::string>& types, int per_type,
                      LatLon center, int radius_m) {
  if (per_type < 1) {
    throw std::invalid_argument("per_type must be >= 1");
  }
  Rng rng(seed);
  PoiDataset ds;
  ds.provenance = Provenance::synthetic;
  ds.scenario.name = "synthetic-" + std::to_string(seed);
  ds.scenario.end = center;
  ds.scenario.search_radius_m = radius_m;
  {
    const double dist_km = rng.uniform(15.0, 25.0);
    const double bearing = rng.uniform(0.0, 2.0 * std::numbers::pi);
    ds.scenario.start = offset_km(center, dist_km * std::cos(bearing), dist_km * std::sin(bearing));
  }
  const double radius_km = radius_m / 1000.0;
  for (const auto& type : types) {
    for (int i = 0; i < per_type; ++i) {
      Poi poi;
      char idx[16];
      std::snprintf(idx, sizeof(idx), "%03d", i);
      poi.id = "syn" + std::to_string(seed) + "-" + slug(type) + "-" + idx;
      poi.poi_type = type;
      const double r = radius_km * std::sqrt(rng.uniform());
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      poi.location = offset_km(center, r * std::cos(theta), r * std::sin(theta));
      double rating = rng.normal(4.2, 0.45);
      for (int tries = 0; (rating < 1.0 || rating > 5.0) && tries < 64; ++tries) {
        rating = rng.normal(4.2, 0.45);
      }
      poi.rating = std::clamp(std::round(rating * 10.0) / 10.0, 1.0, 5.0);
      poi.review_count =
          std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::pow(10.0, 5.0 * rng.uniform()))));
      poi.opening = opening_template(static_cast<int>(rng.uniform_int(0, 4)));
      ds.pois.push_back(std::move(poi));
    }
  }
  check_dataset(ds);
  return ds;
}

PoiDataset default_synth_city(std::uint64_t seed, int per_type) {
  // Logan International Airport to MIT.
  const LatLon mit{42.360091, -71.094160};
  PoiDataset ds = synth_city(seed, hipp_taxonomy(), per_type, mit, 5000);
  ds.scenario.name = "boston-mit-synthetic-" + std::to_string(seed);
  ds.scenario.start = {42.365602, -71.009614};
  return ds;
}

}  // namespace llmap
