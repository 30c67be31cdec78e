#include "llmap/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <set>

namespace llmap {

namespace {

std::vector<std::string> guarded_types(const PoiGraph& g, const Intent& intent) {
  const std::set<std::string> unique(intent.pois.begin(), intent.pois.end());
  if (unique.size() > static_cast<std::size_t>(kOracleMaxTypes)) {
    throw OracleGuardError("oracle refuses " + std::to_string(unique.size()) +
                           " types; the limit is " + std::to_string(kOracleMaxTypes));
  }
  for (const auto& t : unique) {
    const auto m = g.candidates(t).size();
    if (m > static_cast<std::size_t>(kOracleMaxPerType)) {
      throw OracleGuardError("oracle refuses " + std::to_string(m) + " candidates of type '" + t +
                             "'; the limit is " + std::to_string(kOracleMaxPerType));
    }
  }
  return {unique.begin(), unique.end()};
}

bool deps_ok(const std::vector<std::string>& perm, const std::vector<Dependency>& deps) {
  for (const auto& d : deps) {
    const auto a = std::find(perm.begin(), perm.end(), d.before);
    const auto b = std::find(perm.begin(), perm.end(), d.after);
    if (a != perm.end() && b != perm.end() && b < a) {
      return false;
    }
  }
  return true;
}

// Every size-s subset of `types` via bitmask, each in sorted order.
std::vector<std::vector<std::string>> subsets_of_size(const std::vector<std::string>& types, int s) {
  std::vector<std::vector<std::string>> out;
  const unsigned n = static_cast<unsigned>(types.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != s) {
      continue;
    }
    std::vector<std::string> subset;
    for (unsigned i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        subset.push_back(types[i]);
      }
    }
    out.push_back(std::move(subset));
  }
  return out;
}

struct Scored {
  std::vector<std::size_t> nodes;
  std::vector<std::string> ids;
  double score = 0.0;
  double km = 0.0;
};

bool scored_better(const Scored& a, const Scored& b) {
  if (a.score != b.score) {
    return a.score > b.score;
  }
  if (a.km != b.km) {
    return a.km < b.km;
  }
  return a.ids < b.ids;
}

// Calls fn for every START -> one POI per type -> END path.
void for_each_path(const PoiGraph& g, const std::vector<std::string>& perm,
                   const std::function<void(const Scored&)>& fn) {
  Scored cur;
  cur.nodes.push_back(PoiGraph::kStart);
  std::function<void(std::size_t)> rec = [&](std::size_t layer) {
    if (layer == perm.size()) {
      Scored done = cur;
      done.nodes.push_back(PoiGraph::kEnd);
      done.score = 0.0;
      done.km = 0.0;
      for (std::size_t i = 1; i < done.nodes.size(); ++i) {
        done.score += g.weight(done.nodes[i - 1], done.nodes[i]);
        done.km += g.distance_km(done.nodes[i - 1], done.nodes[i]);
      }
      fn(done);
      return;
    }
    for (auto v : g.candidates(perm[layer])) {
      cur.nodes.push_back(v);
      cur.ids.push_back(g.node(v).id);
      rec(layer + 1);
      cur.nodes.pop_back();
      cur.ids.pop_back();
    }
  };
  rec(0);
}

// Independent timeline walk; nullopt when the path breaks a constraint.
std::optional<Route> timed_if_feasible(const Scored& path, const PoiGraph& g, const Intent& intent,
                                       const TravelConfig& cfg, bool* closed = nullptr) {
  Route r;
  double clock = cfg.departure.week_minutes;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    const auto u = path.nodes[i - 1];
    const auto v = path.nodes[i];
    clock += g.travel_min(u, v);
    if (g.is_virtual(v)) {
      continue;
    }
    const Poi& poi = g.node(v);
    const double stay = cfg.visit_for(poi.poi_type);
    if (!is_open_at(poi, Instant{clock}, stay)) {
      if (closed != nullptr) {
        *closed = true;
      }
      return std::nullopt;
    }
    r.stops.push_back(poi.id);
    r.arrivals.push_back(Instant{clock});
    clock += stay;
    r.departures.push_back(Instant{clock});
    r.covered_types.insert(poi.poi_type);
  }
  double deadline = kMinutesPerWeek;
  if (intent.time_limit) {
    deadline = std::min(deadline, static_cast<int>(cfg.departure.day()) * double(kMinutesPerDay) +
                                      intent.time_limit->minutes);
  }
  if (clock > deadline) {
    return std::nullopt;
  }
  r.finish_time = Instant{clock};
  r.score = path.score;
  r.total_length_km = path.km;
  return r;
}

Route direct_route(const PoiGraph& g, const TravelConfig& cfg) {
  Route r;
  r.score = g.weight(PoiGraph::kStart, PoiGraph::kEnd);
  r.total_length_km = g.distance_km(PoiGraph::kStart, PoiGraph::kEnd);
  r.finish_time = cfg.departure.plus(g.travel_min(PoiGraph::kStart, PoiGraph::kEnd));
  return r;
}

}  // namespace

SolverResult oracle_msgs(const PoiGraph& g, const Intent& intent, const TravelConfig& cfg) {
  const auto types = guarded_types(g, intent);
  SolverResult result;
  for (int s = static_cast<int>(types.size()); s >= 1; --s) {
    std::optional<Route> best;
    for (auto perm : subsets_of_size(types, s)) {
      do {
        ++result.candidates_examined;
        if (!deps_ok(perm, intent.dependencies)) {
          ++result.rejections.dependency;
          continue;
        }
        const bool searchable = std::all_of(perm.begin(), perm.end(), [&](const auto& t) {
          return !g.candidates(t).empty();
        });
        if (!searchable) {
          ++result.rejections.empty_type;
          continue;
        }
        ++result.subgraph_searches;
        std::optional<Scored> top;
        for_each_path(g, perm, [&](const Scored& p) {
          if (!top || scored_better(p, *top)) {
            top = p;
          }
        });
        bool closed = false;
        auto route = timed_if_feasible(*top, g, intent, cfg, &closed);
        if (!route) {
          ++(closed ? result.rejections.opening_hours : result.rejections.time_limit);
        } else if (!best || better_route(*route, *best)) {
          best = std::move(route);
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    if (best) {
      result.route = std::move(*best);
      result.subset_size_found = s;
      result.status = SolveStatus::found;
      return result;
    }
  }
  result.route = direct_route(g, cfg);
  return result;
}

SolverResult oracle_true_opt(const PoiGraph& g, const Intent& intent, const TravelConfig& cfg) {
  const auto types = guarded_types(g, intent);
  SolverResult result;
  std::optional<Route> best;
  for (int s = static_cast<int>(types.size()); s >= 1; --s) {
    for (auto perm : subsets_of_size(types, s)) {
      do {
        ++result.candidates_examined;
        if (!deps_ok(perm, intent.dependencies)) {
          continue;
        }
        for_each_path(g, perm, [&](const Scored& p) {
          ++result.subgraph_searches;
          auto route = timed_if_feasible(p, g, intent, cfg);
          if (!route) {
            return;
          }
          const bool wins = !best || route->stops.size() > best->stops.size() ||
                            (route->stops.size() == best->stops.size() &&
                             better_route(*route, *best));
          if (wins) {
            best = std::move(route);
          }
        });
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  if (best) {
    result.subset_size_found = static_cast<int>(best->stops.size());
    result.route = std::move(*best);
    result.status = SolveStatus::found;
  } else {
    result.route = direct_route(g, cfg);
  }
  return result;
}

OracleReport compare_oracles(const PoiGraph& g, const Intent& intent, const TravelConfig& cfg) {
  const SolverResult msgs = oracle_msgs(g, intent, cfg);
  const SolverResult opt = oracle_true_opt(g, intent, cfg);
  OracleReport report;
  report.msgs_route = msgs.route;
  report.true_opt_route = opt.route;
  report.msgs_status = msgs.status;
  report.true_opt_status = opt.status;
  report.instances_enumerated = opt.subgraph_searches;
  report.perm_optimal_coverage = msgs.subset_size_found;
  report.coverage_gap = opt.subset_size_found - msgs.subset_size_found;
  report.coverage_bound = opt.subset_size_found - report.perm_optimal_coverage;
  if (report.coverage_gap != 0) {
    report.gap_score = std::numeric_limits<double>::infinity();
  } else if (opt.status == SolveStatus::found) {
    report.gap_score = opt.route.score - msgs.route.score;
  }
  return report;
}

}  // namespace llmap
