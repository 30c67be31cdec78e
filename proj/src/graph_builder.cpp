#include "llmap/graph_builder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace llmap {

const std::vector<std::size_t>& PoiGraph::candidates(const std::string& poi_type) const {
  static const std::vector<std::size_t> kNone;
  const auto it = type_index_.find(poi_type);
  return it == type_index_.end() ? kNone : it->second;
}

double PoiGraph::normalized_travel(std::size_t i, std::size_t j) const {
  return max_travel_ > 0.0 ? travel_min(i, j) / max_travel_ : 0.0;
}

double PoiGraph::weight(std::size_t i, std::size_t j) const {
  return edge_weight(*this, i, j, weights_);
}

std::optional<std::size_t> PoiGraph::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<double> normalize_quality(const std::vector<Poi>& pois) {
  std::int64_t max_reviews = 0;
  for (const auto& p : pois) {
    max_reviews = std::max(max_reviews, p.review_count);
  }
  const double denom = std::log10(static_cast<double>(max_reviews) + 1.0);
  std::vector<double> q;
  q.reserve(pois.size());
  for (const auto& p : pois) {
    const double rating_term = (p.rating - 1.0) / 4.0;
    const double review_term =
        max_reviews > 0 ? std::log10(static_cast<double>(p.review_count) + 1.0) / denom : 0.0;
    q.push_back(0.5 * rating_term + 0.5 * review_term);
  }
  return q;
}

double edge_weight(const PoiGraph& g, std::size_t i, std::size_t j, const PreferenceWeights& w) {
  if (i >= g.size() || j >= g.size()) {
    throw ContractViolation("edge endpoint out of range");
  }
  if (i == j) {
    throw ContractViolation("no self edges");
  }
  if (!g.is_virtual(i) && !g.is_virtual(j) && g.node(i).poi_type == g.node(j).poi_type) {
    throw ContractViolation("no edge between two '" + g.node(i).poi_type + "' nodes");
  }
  return w.quality * g.quality(j) - w.distance * g.normalized_travel(i, j);
}

PoiGraph build_graph(const PoiDataset& dataset, const Intent& intent, const TravelConfig& cfg) {
  PoiGraph g;
  g.weights_ = weights_of(intent);

  Poi start;
  start.id = kStartId;
  start.location = cfg.start;
  start.opening = {};
  Poi end = start;
  end.id = kEndId;
  end.location = cfg.end;
  g.nodes_ = {start, end};

  const std::set<std::string> wanted(intent.pois.begin(), intent.pois.end());
  for (const auto& t : intent.pois) {
    g.type_index_[t];
  }
  std::vector<Poi> real;
  for (const auto& p : dataset.pois) {
    if (wanted.count(p.poi_type) && !g.by_id_.count(p.id)) {
      g.by_id_[p.id] = g.nodes_.size();
      g.type_index_[p.poi_type].push_back(g.nodes_.size());
      g.nodes_.push_back(p);
      real.push_back(p);
    }
  }

  const auto q = normalize_quality(real);
  g.quality_.assign(2, 0.0);
  g.quality_.insert(g.quality_.end(), q.begin(), q.end());

  const std::size_t n = g.nodes_.size();
  g.travel_.assign(n * n, 0.0);
  g.km_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double km = haversine_km(g.nodes_[i].location, g.nodes_[j].location);
      const double minutes = km / cfg.speed_kmh * 60.0;
      g.km_[i * n + j] = g.km_[j * n + i] = km;
      g.travel_[i * n + j] = g.travel_[j * n + i] = minutes;
      g.max_travel_ = std::max(g.max_travel_, minutes);
    }
  }
  return g;
}

}  // namespace llmap
