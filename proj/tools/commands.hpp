#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "llmap/map_provider.hpp"

namespace llmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitFallback = 2;
inline constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MapSource {
  std::optional<std::string> map;
  std::optional<std::uint64_t> synth_seed;
  int per_type = 10;
  bool live = false;
  int page_limit = 3;
};

/// Throws UsageError when no source was given.
PoiDataset load_map(const MapSource& src);

struct PlanOptions {
  MapSource source;
  std::string query;
  std::string parser = "rule";
  bool cot = false;
  std::string depart = "Mon 10:00";
  double speed_kmh = 30.0;
  std::string out = "json";
};

struct GenOptions {
  MapSource source;
  int n = 1000;
  std::uint64_t seed = 7;
  std::string out;
  std::string writer = "template";
};

struct EvalOptions {
  MapSource source;
  std::string dataset;
  std::string planner = "msgs";
  std::string parser = "label";
  bool cot = false;
  std::string out_dir = ".";
  std::string depart = "Mon 10:00";
  double speed_kmh = 30.0;
};

struct ServeOptions {
  MapSource source;
  std::string host = "127.0.0.1";
  std::optional<int> port;
  std::string parser = "rule";
  bool cot = false;
  std::optional<std::string> snapshot;
  std::string depart = "Mon 10:00";
  double speed_kmh = 30.0;
};

int run_plan(const PlanOptions& opt, std::ostream& out, std::ostream& err);
int run_gen(const GenOptions& opt, std::ostream& out, std::ostream& err);
int run_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);
int run_serve(const ServeOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace llmap::cli
