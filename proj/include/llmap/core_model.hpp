#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace llmap {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kMinutesPerWeek = 7 * kMinutesPerDay;
inline constexpr double kDefaultVisitMinutes = 30.0;

enum class Weekday : std::uint8_t { Mon = 0, Tue, Wed, Thu, Fri, Sat, Sun };

std::string_view to_string(Weekday day);
/// Accepts "Mon".."Sun" and full English names, case-insensitive.
std::optional<Weekday> parse_weekday(std::string_view text);

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

/// Wall-clock minutes since midnight, [0, 1440]. 1440 denotes "24:00".
struct TimeOfDay {
  int minutes = 0;

  static std::optional<TimeOfDay> parse(std::string_view hhmm);
  std::string to_string() const;

  friend auto operator<=>(const TimeOfDay&, const TimeOfDay&) = default;
};

/// A point in the modeled week, in minutes since Monday 00:00.
struct Instant {
  double week_minutes = 0.0;

  static Instant at(Weekday day, double minute_of_day) {
    return Instant{static_cast<double>(static_cast<int>(day)) * kMinutesPerDay +
                   minute_of_day};
  }
  /// Parses "Mon 10:00".
  static std::optional<Instant> parse(std::string_view text);

  Weekday day() const;
  double minute_of_day() const;
  bool within_week() const {
    return week_minutes >= 0.0 && week_minutes <= kMinutesPerWeek;
  }
  Instant plus(double minutes) const { return Instant{week_minutes + minutes}; }
  std::string to_string() const;

  friend auto operator<=>(const Instant&, const Instant&) = default;
};

struct OpeningInterval {
  Weekday day = Weekday::Mon;
  int open_min = 0;
  int close_min = kMinutesPerDay;

  friend bool operator==(const OpeningInterval&, const OpeningInterval&) = default;
};

struct Poi {
  std::string id;
  std::string poi_type;
  double rating = 1.0;
  std::int64_t review_count = 1;
  LatLon location;
  std::vector<OpeningInterval> opening;

  friend bool operator==(const Poi&, const Poi&) = default;
};

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const Poi& poi);

/// Sorts intervals by (day, open) and rejects overlaps within a day.
std::vector<OpeningInterval> normalize_opening(std::vector<OpeningInterval> intervals);

/// Ordered pair: `before` must be visited ahead of `after` when both are.
struct Dependency {
  std::string before;
  std::string after;

  friend auto operator<=>(const Dependency&, const Dependency&) = default;
};

struct Intent {
  std::vector<std::string> pois;
  std::optional<TimeOfDay> time_limit;
  std::vector<Dependency> dependencies;
  double quality_weight = 0.5;
  double distance_weight = 0.5;

  friend bool operator==(const Intent&, const Intent&) = default;
};

inline constexpr double kWeightSumTolerance = 1e-9;

/// True when the Intent satisfies every structural invariant.
bool is_valid(const Intent& intent);

struct TravelConfig {
  Instant departure = Instant::at(Weekday::Mon, 600);
  double speed_kmh = 30.0;
  std::map<std::string, double> visit_minutes = default_visit_minutes();
  double fallback_visit_minutes = kDefaultVisitMinutes;
  LatLon start;
  LatLon end;

  double visit_for(const std::string& poi_type) const;

  static std::map<std::string, double> default_visit_minutes() {
    return {{"shopping mall", 120.0},
            {"supermarket", 30.0},
            {"pharmacy", 15.0},
            {"bank", 20.0},
            {"library", 60.0}};
  }
};

struct Route {
  std::vector<std::string> stops;
  std::vector<Instant> arrivals;
  std::vector<Instant> departures;
  double total_length_km = 0.0;
  Instant finish_time;
  double score = 0.0;
  std::set<std::string> covered_types;
};

double haversine_km(const LatLon& a, const LatLon& b);

double travel_minutes(const LatLon& a, const LatLon& b, const TravelConfig& cfg);

/// True iff one opening interval of the instant's day contains the whole
/// stay [instant, instant + stay_minutes].
bool is_open_at(const Poi& poi, Instant instant, double stay_minutes);

}  // namespace llmap
