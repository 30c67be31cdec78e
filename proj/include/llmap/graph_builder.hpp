#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "llmap/core_model.hpp"
#include "llmap/map_provider.hpp"

namespace llmap {

struct PreferenceWeights {
  double quality = 0.5;
  double distance = 0.5;
};

inline PreferenceWeights weights_of(const Intent& intent) {
  return {intent.quality_weight, intent.distance_weight};
}

/// Raised when an edge is requested between two nodes that have none.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Weighted POI graph. Node 0 is the virtual START, node 1 the virtual END;
/// candidate POIs follow in dataset order.
class PoiGraph {
 public:
  static constexpr std::size_t kStart = 0;
  static constexpr std::size_t kEnd = 1;

  std::size_t size() const { return nodes_.size(); }
  bool is_virtual(std::size_t i) const { return i < 2; }
  const Poi& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<Poi>& nodes() const { return nodes_; }

  /// Every intent type appears, possibly with no candidates.
  const std::map<std::string, std::vector<std::size_t>>& type_index() const { return type_index_; }
  const std::vector<std::size_t>& candidates(const std::string& poi_type) const;

  double travel_min(std::size_t i, std::size_t j) const { return travel_[i * size() + j]; }
  double distance_km(std::size_t i, std::size_t j) const { return km_[i * size() + j]; }
  double max_travel_min() const { return max_travel_; }
  /// travel_min / max pairwise travel, 0 when every node coincides.
  double normalized_travel(std::size_t i, std::size_t j) const;

  double quality(std::size_t i) const { return quality_.at(i); }
  const PreferenceWeights& weights() const { return weights_; }

  /// w(i, j) under the graph's own preference weights.
  double weight(std::size_t i, std::size_t j) const;

  std::optional<std::size_t> find(const std::string& id) const;

 private:
  friend PoiGraph build_graph(const PoiDataset&, const Intent&, const TravelConfig&);

  std::vector<Poi> nodes_;
  std::map<std::string, std::vector<std::size_t>> type_index_;
  std::map<std::string, std::size_t> by_id_;
  std::vector<double> travel_;
  std::vector<double> km_;
  double max_travel_ = 0.0;
  std::vector<double> quality_;
  PreferenceWeights weights_;
};

inline const std::string kStartId = "__start__";
inline const std::string kEndId = "__end__";

PoiGraph build_graph(const PoiDataset& dataset, const Intent& intent, const TravelConfig& cfg);

/// q(v) = 0.5 (rating - 1) / 4 + 0.5 log10(reviews + 1) / log10(maxReviews + 1).
std::vector<double> normalize_quality(const std::vector<Poi>& pois);

/// quality * q(j) - distance * normalized travel(i, j). Throws
/// ContractViolation for i == j or two real nodes of the same type.
double edge_weight(const PoiGraph& g, std::size_t i, std::size_t j, const PreferenceWeights& w);

}  // namespace llmap
