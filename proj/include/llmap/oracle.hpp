#pragma once

#include <cstdint>
#include <stdexcept>

#include "llmap/core_model.hpp"
#include "llmap/graph_builder.hpp"
#include "llmap/msgs_solver.hpp"

namespace llmap {

inline constexpr int kOracleMaxTypes = 5;
inline constexpr int kOracleMaxPerType = 5;

/// Thrown when an instance exceeds the exhaustive oracles' size guard.
class OracleGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Brute-force mirror of solve: same enumeration and early stop, but every
/// path of every permutation is scored instead of running the DP. Counters are
/// filled with the same meaning as the solver's.
SolverResult oracle_msgs(const PoiGraph& g, const Intent& intent, const TravelConfig& cfg);

/// Best route over every feasible timed path of every dependency-valid
/// permutation: most covered types first, then score, then the solver's
/// tie-breaks. status is fallback when nothing is feasible.
SolverResult oracle_true_opt(const PoiGraph& g, const Intent& intent, const TravelConfig& cfg);

struct OracleReport {
  Route msgs_route;
  Route true_opt_route;
  SolveStatus msgs_status = SolveStatus::fallback;
  SolveStatus true_opt_status = SolveStatus::fallback;
  /// true_opt score minus msgs score; +inf when the two cover different counts.
  double gap_score = 0.0;
  /// Covered types of true_opt minus covered types of msgs.
  int coverage_gap = 0;
  /// Upper bound on coverage_gap for a permutation-optimal search: true_opt
  /// coverage minus the largest size at which some permutation's score-optimal
  /// path is feasible.
  int coverage_bound = 0;
  /// Largest size whose permutation-optimal path is feasible (0 if none).
  int perm_optimal_coverage = 0;
  std::int64_t instances_enumerated = 0;  // timed paths checked by true_opt
};

OracleReport compare_oracles(const PoiGraph& g, const Intent& intent, const TravelConfig& cfg);

}  // namespace llmap
