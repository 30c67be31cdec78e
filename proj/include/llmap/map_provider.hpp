#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "llmap/core_model.hpp"

namespace llmap {

enum class Provenance { fixture, synthetic, live };

struct ScenarioInfo {
  std::string name;
  LatLon start;
  LatLon end;
  int search_radius_m = 5000;

  friend bool operator==(const ScenarioInfo&, const ScenarioInfo&) = default;
};

struct PoiDataset {
  std::vector<Poi> pois;
  ScenarioInfo scenario;
  Provenance provenance = Provenance::fixture;
};

/// A POI record as it arrives from a source, before defaulting.
struct RawPoi {
  std::optional<std::string> id;
  std::optional<std::string> poi_type;
  std::optional<double> rating;
  std::optional<std::int64_t> review_count;
  std::optional<double> lat;
  std::optional<double> lon;
  std::optional<std::vector<OpeningInterval>> opening;
};

class FixtureError : public std::runtime_error {
 public:
  FixtureError(const std::string& what, std::optional<std::size_t> byte_offset = std::nullopt)
      : std::runtime_error(what), byte_offset_(byte_offset) {}
  std::optional<std::size_t> byte_offset() const { return byte_offset_; }

 private:
  std::optional<std::size_t> byte_offset_;
};

/// Fills missing attributes: rating 1.0, reviews 1, opening Mon-Sun 09:00-17:00.
/// Throws FixtureError when id, type or coordinates are missing.
Poi apply_defaults(const RawPoi& raw);

std::vector<OpeningInterval> standard_business_hours();

/// Parses the fixture JSON document; see README for the schema.
PoiDataset parse_fixture(const std::string& text);
PoiDataset load_fixture(const std::filesystem::path& path);

nlohmann::json fixture_to_json(const PoiDataset& dataset);

/// Deterministic stand-in city: `per_type` POIs for each type, uniform in a
/// disc of `radius_m` around `center`.
PoiDataset synth_city(std::uint64_t seed, const std::vector<std::string>& types, int per_type,
                      LatLon center, int radius_m);

/// The five HIPP POI types.
const std::vector<std::string>& hipp_taxonomy();

/// synth_city over the HIPP taxonomy, from Logan airport to MIT.
PoiDataset default_synth_city(std::uint64_t seed, int per_type = 10);

/// Asserts dataset invariants: unique ids, every POI valid.
void check_dataset(const PoiDataset& dataset);

// ---- live Places-compatible endpoint ----

class LiveFetchError : public std::runtime_error {
 public:
  LiveFetchError(const std::string& what, int http_status)
      : std::runtime_error(what), http_status_(http_status) {}
  /// 0 for transport failures with no HTTP response.
  int http_status() const { return http_status_; }

 private:
  int http_status_;
};

struct PlacesEndpoint {
  std::string base_url;
  std::string api_key;

  /// Reads LLMAP_PLACES_BASE_URL / LLMAP_PLACES_API_KEY; nullopt when unset.
  static std::optional<PlacesEndpoint> from_env();
};

/// Converts one Places "result" object into a raw record of the given type.
RawPoi import_places_result(const nlohmann::json& result, const std::string& poi_type);

/// Queries nearby-search pages for each type (20 results per page) until the
/// results are exhausted or `page_limit` pages were read. Pages are requested
/// sequentially; duplicate ids keep their first-seen type.
PoiDataset fetch_live(const PlacesEndpoint& endpoint, const ScenarioInfo& scenario,
                      const std::vector<std::string>& types, int page_limit);

}  // namespace llmap
