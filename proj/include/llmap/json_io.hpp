#pragma once

#include <string>

#include <json.hpp>

#include "llmap/core_model.hpp"
#include "llmap/map_provider.hpp"

namespace llmap {

using nlohmann::json;

json latlon_to_json(const LatLon& p);
LatLon latlon_from_json(const json& j);

json scenario_to_json(const ScenarioInfo& s);
ScenarioInfo scenario_from_json(const json& j);

/// The five-key wire form: pois, time_limit ("HH:MM" or "None"),
/// dependencies, quality_weight, distance_weight.
json intent_to_json(const Intent& intent);

/// Strict inverse of intent_to_json; throws std::invalid_argument on any
/// schema deviation. Use repair_intent for untrusted input.
Intent intent_from_json(const json& j);

json route_to_json(const Route& route);

std::string provenance_name(Provenance p);

}  // namespace llmap
