#include "llmap/msgs_solver.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace llmap {

bool satisfies_dependencies(const Permutation& perm, const std::vector<Dependency>& deps) {
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    position.emplace(perm[i], i);
  }
  for (const auto& d : deps) {
    const auto a = position.find(d.before);
    const auto b = position.find(d.after);
    if (a != position.end() && b != position.end() && a->second >= b->second) {
      return false;
    }
  }
  return true;
}

std::size_t LayeredDag::edge_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    n += layers[l].size() * layers[l + 1].size();
  }
  return n;
}

std::optional<LayeredDag> build_layered_subgraph(const PoiGraph& g, const Permutation& perm) {
  LayeredDag dag;
  dag.layers.push_back({PoiGraph::kStart});
  for (const auto& type : perm) {
    const auto& cand = g.candidates(type);
    if (cand.empty()) {
      return std::nullopt;
    }
    dag.layers.push_back(cand);
  }
  dag.layers.push_back({PoiGraph::kEnd});

  for (const auto& layer : dag.layers) {
    std::vector<std::string> ids;
    for (auto v : layer) {
      ids.push_back(g.node(v).id);
    }
    dag.ids.push_back(std::move(ids));
  }
  for (std::size_t l = 0; l + 1 < dag.layers.size(); ++l) {
    const auto& from = dag.layers[l];
    const auto& to = dag.layers[l + 1];
    std::vector<double> w(from.size() * to.size());
    std::vector<double> km(from.size() * to.size());
    for (std::size_t a = 0; a < from.size(); ++a) {
      for (std::size_t b = 0; b < to.size(); ++b) {
        w[a * to.size() + b] = g.weight(from[a], to[b]);
        km[a * to.size() + b] = g.distance_km(from[a], to[b]);
      }
    }
    dag.weight.push_back(std::move(w));
    dag.length_km.push_back(std::move(km));
  }
  return dag;
}

PathChoice best_path(const LayeredDag& dag) {
  // Forward DP, one label per node: best (score, length, ids) prefix ending there.
  struct Label {
    double score = 0.0;
    double km = 0.0;
    std::size_t pred = 0;
  };
  const std::size_t depth = dag.layers.size();
  std::vector<std::vector<Label>> labels(depth);
  labels[0].assign(dag.layers[0].size(), Label{});

  auto prefix_ids = [&](std::size_t layer, std::size_t at) {
    std::vector<std::string> ids;
    for (std::size_t l = layer; l > 0; --l) {
      ids.push_back(dag.ids[l][at]);
      at = labels[l][at].pred;
    }
    std::reverse(ids.begin(), ids.end());
    return ids;
  };

  for (std::size_t l = 1; l < depth; ++l) {
    const auto& prev = labels[l - 1];
    const std::size_t width = dag.layers[l].size();
    labels[l].resize(width);
    for (std::size_t b = 0; b < width; ++b) {
      bool have = false;
      Label best;
      for (std::size_t a = 0; a < prev.size(); ++a) {
        Label cand{prev[a].score + dag.weight[l - 1][a * width + b],
                   prev[a].km + dag.length_km[l - 1][a * width + b], a};
        bool take = !have || cand.score > best.score ||
                    (cand.score == best.score && cand.km < best.km);
        if (have && cand.score == best.score && cand.km == best.km) {
          // Compare prefixes (excluding this node, shared by both).
          take = prefix_ids(l - 1, cand.pred) < prefix_ids(l - 1, best.pred);
        }
        if (take) {
          best = cand;
          have = true;
        }
      }
      labels[l][b] = best;
    }
  }

  PathChoice out;
  std::size_t at = 0;  // END layer has a single node
  out.score = labels[depth - 1][at].score;
  out.length_km = labels[depth - 1][at].km;
  std::vector<std::size_t> nodes;
  for (std::size_t l = depth - 1;; --l) {
    nodes.push_back(dag.layers[l][at]);
    if (l == 0) {
      break;
    }
    at = labels[l][at].pred;
  }
  std::reverse(nodes.begin(), nodes.end());
  out.nodes = std::move(nodes);
  return out;
}

std::string to_string(InfeasibleReason r) {
  return r == InfeasibleReason::time_limit ? "time_limit" : "opening_hours";
}

Route simulate_route(const std::vector<std::size_t>& path, const PoiGraph& g,
                     const TravelConfig& cfg) {
  Route route;
  Instant clock = cfg.departure;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const std::size_t u = path[i - 1];
    const std::size_t v = path[i];
    route.score += g.weight(u, v);
    route.total_length_km += g.distance_km(u, v);
    clock = clock.plus(g.travel_min(u, v));
    if (g.is_virtual(v)) {
      continue;
    }
    const Poi& poi = g.node(v);
    route.stops.push_back(poi.id);
    route.arrivals.push_back(clock);
    clock = clock.plus(cfg.visit_for(poi.poi_type));
    route.departures.push_back(clock);
    route.covered_types.insert(poi.poi_type);
  }
  route.finish_time = clock;
  return route;
}

Instant deadline_of(const Intent& intent, const TravelConfig& cfg) {
  if (!intent.time_limit) {
    return Instant{static_cast<double>(kMinutesPerWeek)};
  }
  return Instant::at(cfg.departure.day(), intent.time_limit->minutes);
}

std::variant<Route, Infeasible> validate_schedule(const std::vector<std::size_t>& path,
                                                  const PoiGraph& g, const Intent& intent,
                                                  const TravelConfig& cfg) {
  Route route = simulate_route(path, g, cfg);
  std::size_t k = 0;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const Poi& poi = g.node(path[i]);
    if (!is_open_at(poi, route.arrivals[k], cfg.visit_for(poi.poi_type))) {
      return Infeasible{InfeasibleReason::opening_hours, poi.id};
    }
    ++k;
  }
  const Instant deadline = std::min(deadline_of(intent, cfg), Instant{double(kMinutesPerWeek)});
  if (route.finish_time > deadline) {
    return Infeasible{InfeasibleReason::time_limit, {}};
  }
  return route;
}

bool better_route(const Route& a, const Route& b) {
  if (a.score != b.score) {
    return a.score > b.score;
  }
  if (a.total_length_km != b.total_length_km) {
    return a.total_length_km < b.total_length_km;
  }
  return a.stops < b.stops;
}

std::vector<std::string> sorted_types(const Intent& intent) {
  std::set<std::string> s(intent.pois.begin(), intent.pois.end());
  return {s.begin(), s.end()};
}

std::int64_t permutation_bound(int k, int min_size) {
  std::int64_t total = 0;
  for (int s = std::max(1, min_size); s <= k; ++s) {
    // C(k, s) * s! = k! / (k - s)!
    std::int64_t falling = 1;
    for (int i = 0; i < s; ++i) {
      falling *= (k - i);
    }
    total += falling;
  }
  return total;
}

SolverResult solve(const PoiGraph& g, const Intent& intent, const TravelConfig& cfg) {
  SolverResult result;
  const auto types = sorted_types(intent);
  const int k = static_cast<int>(types.size());

  for (int s = k; s >= 1; --s) {
    std::optional<Route> best;
    for_each_combination(types, s, [&](std::vector<std::string> perm) {
      do {
        ++result.candidates_examined;
        if (!satisfies_dependencies(perm, intent.dependencies)) {
          ++result.rejections.dependency;
          continue;
        }
        const auto dag = build_layered_subgraph(g, perm);
        if (!dag) {
          ++result.rejections.empty_type;
          continue;
        }
        ++result.subgraph_searches;
        const PathChoice path = best_path(*dag);
        auto checked = validate_schedule(path.nodes, g, intent, cfg);
        if (auto* bad = std::get_if<Infeasible>(&checked)) {
          ++(bad->reason == InfeasibleReason::time_limit ? result.rejections.time_limit
                                                         : result.rejections.opening_hours);
          continue;
        }
        Route& route = std::get<Route>(checked);
        if (!best || better_route(route, *best)) {
          best = std::move(route);
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
    if (best) {
      result.route = std::move(*best);
      result.subset_size_found = s;
      result.status = SolveStatus::found;
      return result;
    }
  }
  result.route = simulate_route({PoiGraph::kStart, PoiGraph::kEnd}, g, cfg);
  result.status = SolveStatus::fallback;
  return result;
}

}  // namespace llmap
