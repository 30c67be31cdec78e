#include "llmap/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace llmap {

RouteMetrics route_metrics(const Route& route, const Intent& label, const std::vector<Poi>& pois,
                           const TravelConfig& cfg) {
  std::map<std::string, const Poi*> by_id;
  for (const auto& p : pois) {
    by_id.emplace(p.id, &p);
  }
  std::vector<const Poi*> stops;
  for (const auto& id : route.stops) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw std::invalid_argument("route references unknown poi '" + id + "'");
    }
    stops.push_back(it->second);
  }

  RouteMetrics m;
  Instant clock = cfg.departure;
  LatLon here = cfg.start;
  std::vector<std::string> visited_types;
  for (const Poi* p : stops) {
    const double km = haversine_km(here, p->location);
    m.length_km += km;
    clock = clock.plus(km / cfg.speed_kmh * 60.0);
    const double stay = cfg.visit_for(p->poi_type);
    if (!is_open_at(*p, clock, stay)) {
      m.opening_violated = true;
    }
    clock = clock.plus(stay);
    here = p->location;
    m.mean_rating += p->rating;
    m.mean_reviews += static_cast<double>(p->review_count);
    visited_types.push_back(p->poi_type);
  }
  const double last_km = haversine_km(here, cfg.end);
  m.length_km += last_km;
  clock = clock.plus(last_km / cfg.speed_kmh * 60.0);

  if (!stops.empty()) {
    m.mean_rating /= static_cast<double>(stops.size());
    m.mean_reviews /= static_cast<double>(stops.size());
  }

  const std::set<std::string> requested(label.pois.begin(), label.pois.end());
  if (!requested.empty()) {
    std::size_t covered = 0;
    for (const auto& t : requested) {
      if (std::find(visited_types.begin(), visited_types.end(), t) != visited_types.end()) {
        ++covered;
      }
    }
    m.completion_rate = static_cast<double>(covered) / static_cast<double>(requested.size());
  }

  if (label.time_limit) {
    const Instant deadline = Instant::at(cfg.departure.day(), label.time_limit->minutes);
    m.time_overshoot_hours = std::max(0.0, clock.week_minutes - deadline.week_minutes) / 60.0;
  }

  for (const auto& d : label.dependencies) {
    const auto a = std::find(visited_types.begin(), visited_types.end(), d.before);
    const auto b = std::find(visited_types.begin(), visited_types.end(), d.after);
    if (a != visited_types.end() && b != visited_types.end() && b < a) {
      m.dependency_violated = true;
    }
  }
  return m;
}

RouteMetrics route_metrics(const Route& route, const Intent& label, const PoiGraph& g,
                           const TravelConfig& cfg) {
  return route_metrics(route, label, g.nodes(), cfg);
}

template <typename T>
SetScore set_score(const std::vector<T>& label, const std::vector<T>& predicted) {
  const std::set<T> y(label.begin(), label.end());
  const std::set<T> y_hat(predicted.begin(), predicted.end());
  std::size_t hit = 0;
  for (const auto& x : y_hat) {
    hit += y.count(x);
  }
  SetScore s;
  if (y_hat.empty()) {
    s.precision = y.empty() ? 1.0 : 0.0;
  } else {
    s.precision = static_cast<double>(hit) / static_cast<double>(y_hat.size());
  }
  if (y.empty()) {
    s.recall = y_hat.empty() ? 1.0 : 0.0;
  } else {
    s.recall = static_cast<double>(hit) / static_cast<double>(y.size());
  }
  const double denom = s.precision + s.recall;
  s.f1 = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

template SetScore set_score<std::string>(const std::vector<std::string>&,
                                         const std::vector<std::string>&);
template SetScore set_score<Dependency>(const std::vector<Dependency>&,
                                        const std::vector<Dependency>&);

std::string normalized_time(const Intent& intent) {
  return intent.time_limit ? intent.time_limit->to_string() : "None";
}

double weight_similarity(const Intent& label, const Intent& estimate) {
  const double dq = std::abs(label.quality_weight - estimate.quality_weight);
  const double dd = std::abs(label.distance_weight - estimate.distance_weight);
  return 1.0 - (dq + dd) / 2.0;
}

ParserMetrics parser_metrics(const Intent& label, const Intent& estimate) {
  ParserMetrics m;
  m.pois = set_score(label.pois, estimate.pois);
  m.dependencies = set_score(label.dependencies, estimate.dependencies);
  m.time_accuracy = normalized_time(label) == normalized_time(estimate) ? 1.0 : 0.0;
  m.weight_similarity = weight_similarity(label, estimate);
  return m;
}

std::string_view to_string(ColorClass c) {
  switch (c) {
    case ColorClass::best:
      return "best";
    case ColorClass::good:
      return "good";
    case ColorClass::fair:
      return "fair";
    case ColorClass::poor:
      return "poor";
  }
  return "poor";
}

ColorClass classify_rating(double r) {
  if (r >= 4.0) return ColorClass::best;
  if (r >= 3.5) return ColorClass::good;
  if (r >= 3.0) return ColorClass::fair;
  return ColorClass::poor;
}

ColorClass classify_reviews(double n) { return n >= 1000.0 ? ColorClass::best : ColorClass::poor; }

ColorClass classify_length(double km) { return km <= 30.0 ? ColorClass::best : ColorClass::poor; }

ColorClass classify_completion(double pct) {
  if (pct >= 90.0) return ColorClass::best;
  if (pct >= 80.0) return ColorClass::good;
  if (pct >= 70.0) return ColorClass::fair;
  return ColorClass::poor;
}

ColorClass classify_overshoot(double hours) {
  if (hours <= 0.0) return ColorClass::best;
  if (hours < 1.0 / 3.0) return ColorClass::good;
  if (hours < 1.0) return ColorClass::fair;
  return ColorClass::poor;
}

ColorClass classify_violation(double pct) {
  return pct <= 0.0 ? ColorClass::best : ColorClass::poor;
}

RouteSummary aggregate(const std::vector<RouteMetrics>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("cannot aggregate zero samples");
  }
  RouteSummary s;
  s.samples = samples.size();
  for (const auto& m : samples) {
    s.rating += m.mean_rating;
    s.reviews += m.mean_reviews;
    s.length_km += m.length_km;
    s.completion_pct += m.completion_rate;
    s.time_overshoot_hours += m.time_overshoot_hours;
    s.dependency_pct += m.dependency_violated ? 1.0 : 0.0;
    s.opening_pct += m.opening_violated ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(samples.size());
  s.rating /= n;
  s.reviews /= n;
  s.length_km /= n;
  s.completion_pct = 100.0 * s.completion_pct / n;
  s.time_overshoot_hours /= n;
  s.dependency_pct = 100.0 * s.dependency_pct / n;
  s.opening_pct = 100.0 * s.opening_pct / n;
  return s;
}

ParserSummary aggregate(const std::vector<ParserMetrics>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("cannot aggregate zero samples");
  }
  ParserSummary s;
  s.samples = samples.size();
  for (const auto& m : samples) {
    s.pois.precision += m.pois.precision;
    s.pois.recall += m.pois.recall;
    s.dependencies.precision += m.dependencies.precision;
    s.dependencies.recall += m.dependencies.recall;
    s.time_accuracy += m.time_accuracy;
    s.weight_similarity += m.weight_similarity;
  }
  const double n = static_cast<double>(samples.size());
  for (SetScore* set : {&s.pois, &s.dependencies}) {
    set->precision /= n;
    set->recall /= n;
    const double denom = set->precision + set->recall;
    set->f1 = denom > 0.0 ? 2.0 * set->precision * set->recall / denom : 0.0;
  }
  s.time_accuracy /= n;
  s.weight_similarity /= n;
  return s;
}

namespace {

nlohmann::json set_to_json(const SetScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace

nlohmann::json route_metrics_to_json(const RouteMetrics& m) {
  return {{"mean_rating", m.mean_rating},
          {"mean_reviews", m.mean_reviews},
          {"length_km", m.length_km},
          {"completion_rate", m.completion_rate},
          {"time_overshoot_hours", m.time_overshoot_hours},
          {"dependency_violated", m.dependency_violated},
          {"opening_violated", m.opening_violated}};
}

nlohmann::json parser_metrics_to_json(const ParserMetrics& m) {
  return {{"pois", set_to_json(m.pois)},
          {"dependencies", set_to_json(m.dependencies)},
          {"time_accuracy", m.time_accuracy},
          {"weight_similarity", m.weight_similarity}};
}

nlohmann::json summary_to_json(const RouteSummary& s) {
  auto cls = [](ColorClass c) { return std::string(to_string(c)); };
  return {{"samples", s.samples},
          {"rating", s.rating},
          {"reviews", s.reviews},
          {"length_km", s.length_km},
          {"completion_pct", s.completion_pct},
          {"time_overshoot_hours", s.time_overshoot_hours},
          {"dependency_pct", s.dependency_pct},
          {"opening_pct", s.opening_pct},
          {"classes",
           {{"rating", cls(classify_rating(s.rating))},
            {"reviews", cls(classify_reviews(s.reviews))},
            {"length_km", cls(classify_length(s.length_km))},
            {"completion_pct", cls(classify_completion(s.completion_pct))},
            {"time_overshoot_hours", cls(classify_overshoot(s.time_overshoot_hours))},
            {"dependency_pct", cls(classify_violation(s.dependency_pct))},
            {"opening_pct", cls(classify_violation(s.opening_pct))}}}};
}

nlohmann::json summary_to_json(const ParserSummary& s) {
  return {{"samples", s.samples},
          {"pois", set_to_json(s.pois)},
          {"dependencies", set_to_json(s.dependencies)},
          {"time_accuracy", s.time_accuracy},
          {"weight_similarity", s.weight_similarity}};
}

std::string summary_to_csv(const RouteSummary& s) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "samples,rating,reviews,length_km,completion_pct,time_overshoot_hours,dependency_pct,"
         "opening_pct,rating_class,reviews_class,length_class,completion_class,"
         "time_overshoot_class,dependency_class,opening_class\n";
  out << s.samples << ',' << s.rating << ',' << s.reviews << ',' << s.length_km << ','
      << s.completion_pct << ',' << s.time_overshoot_hours << ',' << s.dependency_pct << ','
      << s.opening_pct << ',' << to_string(classify_rating(s.rating)) << ','
      << to_string(classify_reviews(s.reviews)) << ',' << to_string(classify_length(s.length_km))
      << ',' << to_string(classify_completion(s.completion_pct)) << ','
      << to_string(classify_overshoot(s.time_overshoot_hours)) << ','
      << to_string(classify_violation(s.dependency_pct)) << ','
      << to_string(classify_violation(s.opening_pct)) << '\n';
  return out.str();
}

}  // namespace llmap
