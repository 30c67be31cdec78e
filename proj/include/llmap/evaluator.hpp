#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "llmap/core_model.hpp"
#include "llmap/graph_builder.hpp"
#include "llmap/map_provider.hpp"

namespace llmap {

struct RouteMetrics {
  double mean_rating = 0.0;
  double mean_reviews = 0.0;
  double length_km = 0.0;
  double completion_rate = 1.0;  // fraction of requested types covered
  double time_overshoot_hours = 0.0;
  bool dependency_violated = false;
  bool opening_violated = false;
};

/// Re-simulates the route's stops with `cfg` and scores it against the
/// labeled intent. Throws std::invalid_argument for stop ids not in `pois`.
RouteMetrics route_metrics(const Route& route, const Intent& label, const std::vector<Poi>& pois,
                           const TravelConfig& cfg);
RouteMetrics route_metrics(const Route& route, const Intent& label, const PoiGraph& g,
                           const TravelConfig& cfg);

struct SetScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Per-sample precision and recall; an empty prediction has precision 1 only
/// when the label is empty too, and symmetrically for recall.
template <typename T>
SetScore set_score(const std::vector<T>& label, const std::vector<T>& predicted);

struct ParserMetrics {
  SetScore pois;
  SetScore dependencies;
  double time_accuracy = 0.0;  // 0 or 1
  double weight_similarity = 0.0;
};

ParserMetrics parser_metrics(const Intent& label, const Intent& estimate);

/// "HH:MM" or "None".
std::string normalized_time(const Intent& intent);

double weight_similarity(const Intent& label, const Intent& estimate);

enum class ColorClass { best, good, fair, poor };

std::string_view to_string(ColorClass c);

ColorClass classify_rating(double mean_rating);
ColorClass classify_reviews(double mean_reviews);
ColorClass classify_length(double length_km);
ColorClass classify_completion(double completion_pct);
ColorClass classify_overshoot(double hours);
ColorClass classify_violation(double pct);

struct RouteSummary {
  std::size_t samples = 0;
  double rating = 0.0;
  double reviews = 0.0;
  double length_km = 0.0;
  double completion_pct = 0.0;
  double time_overshoot_hours = 0.0;
  double dependency_pct = 0.0;
  double opening_pct = 0.0;
};

/// Column means; violation flags become the percentage of flagged samples.
/// Throws std::invalid_argument on an empty list.
RouteSummary aggregate(const std::vector<RouteMetrics>& samples);

struct ParserSummary {
  std::size_t samples = 0;
  SetScore pois;          // precision and recall averaged, F1 from the averages
  SetScore dependencies;
  double time_accuracy = 0.0;
  double weight_similarity = 0.0;
};

ParserSummary aggregate(const std::vector<ParserMetrics>& samples);

nlohmann::json route_metrics_to_json(const RouteMetrics& m);
nlohmann::json parser_metrics_to_json(const ParserMetrics& m);
nlohmann::json summary_to_json(const RouteSummary& s);
nlohmann::json summary_to_json(const ParserSummary& s);

/// Header line plus one row: the seven metrics followed by their classes.
std::string summary_to_csv(const RouteSummary& s);

}  // namespace llmap
