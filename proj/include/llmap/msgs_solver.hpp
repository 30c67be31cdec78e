#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "llmap/core_model.hpp"
#include "llmap/graph_builder.hpp"

namespace llmap {

/// Ordered POI types; one layer per type in the subgraph.
using Permutation = std::vector<std::string>;

bool satisfies_dependencies(const Permutation& perm, const std::vector<Dependency>& deps);

/// START -> one layer per permuted type -> END, edges only between
/// consecutive layers.
struct LayeredDag {
  std::vector<std::vector<std::size_t>> layers;  // graph node indices
  std::vector<std::vector<std::string>> ids;     // parallel to layers
  // weight[l][a * layers[l+1].size() + b] is the edge layers[l][a] -> layers[l+1][b].
  std::vector<std::vector<double>> weight;
  std::vector<std::vector<double>> length_km;

  std::size_t edge_count() const;
};

/// nullopt is the skip signal: some type in the permutation has no candidates.
std::optional<LayeredDag> build_layered_subgraph(const PoiGraph& g, const Permutation& perm);

struct PathChoice {
  std::vector<std::size_t> nodes;  // START ... END, graph indices
  double score = 0.0;
  double length_km = 0.0;
};

/// Max summed edge weight START -> END. Ties: shorter length, then the
/// lexicographically smaller stop-id sequence.
PathChoice best_path(const LayeredDag& dag);

enum class InfeasibleReason { time_limit, opening_hours };

struct Infeasible {
  InfeasibleReason reason;
  std::string poi_id;  // set for opening_hours
};

std::string to_string(InfeasibleReason r);

/// Times a START ... END path without checking constraints. Score is the
/// left-to-right sum of edge weights.
Route simulate_route(const std::vector<std::size_t>& path, const PoiGraph& g,
                     const TravelConfig& cfg);

/// Deadline of the intent on the departure day; the end of the modeled week
/// when no limit is set.
Instant deadline_of(const Intent& intent, const TravelConfig& cfg);

std::variant<Route, Infeasible> validate_schedule(const std::vector<std::size_t>& path,
                                                  const PoiGraph& g, const Intent& intent,
                                                  const TravelConfig& cfg);

/// Total order used to pick among feasible candidates: true when a beats b.
bool better_route(const Route& a, const Route& b);

enum class SolveStatus { found, fallback };

struct RejectionCounts {
  std::int64_t dependency = 0;
  std::int64_t empty_type = 0;
  std::int64_t time_limit = 0;
  std::int64_t opening_hours = 0;
};

struct SolverResult {
  Route route;
  int subset_size_found = 0;
  std::int64_t candidates_examined = 0;  // permutations enumerated
  std::int64_t subgraph_searches = 0;    // best_path runs
  SolveStatus status = SolveStatus::fallback;
  RejectionCounts rejections;
};

SolverResult solve(const PoiGraph& g, const Intent& intent, const TravelConfig& cfg);

/// Sum over s in [min_size, k] of C(k, s) * s!.
std::int64_t permutation_bound(int k, int min_size);

/// Sorted, de-duplicated intent types; the solver's enumeration universe.
std::vector<std::string> sorted_types(const Intent& intent);

/// Visits every size-s subset of `items` (lexicographic by index).
template <typename Fn>
void for_each_combination(const std::vector<std::string>& items, int s, Fn&& fn) {
  const int n = static_cast<int>(items.size());
  if (s > n || s <= 0) {
    return;
  }
  std::vector<int> idx(s);
  for (int i = 0; i < s; ++i) {
    idx[i] = i;
  }
  while (true) {
    std::vector<std::string> subset;
    subset.reserve(s);
    for (int i : idx) {
      subset.push_back(items[i]);
    }
    fn(subset);
    int i = s - 1;
    while (i >= 0 && idx[i] == n - s + i) {
      --i;
    }
    if (i < 0) {
      return;
    }
    ++idx[i];
    for (int j = i + 1; j < s; ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
}

}  // namespace llmap
