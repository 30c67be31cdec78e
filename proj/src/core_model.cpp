#include "llmap/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

namespace llmap {

namespace {

constexpr std::array<std::string_view, 7> kDayShort = {"Mon", "Tue", "Wed", "Thu",
                                                       "Fri", "Sat", "Sun"};
constexpr std::array<std::string_view, 7> kDayLong = {
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

std::string_view to_string(Weekday day) { return kDayShort[static_cast<int>(day)]; }

std::optional<Weekday> parse_weekday(std::string_view text) {
  const std::string t = lower(text);
  for (std::size_t i = 0; i < kDayShort.size(); ++i) {
    if (t == lower(kDayShort[i]) || t == kDayLong[i]) {
      return static_cast<Weekday>(i);
    }
  }
  return std::nullopt;
}

std::optional<TimeOfDay> TimeOfDay::parse(std::string_view hhmm) {
  int h = 0;
  int m = 0;
  const auto colon = hhmm.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon > 2 ||
      hhmm.size() != colon + 3) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < hhmm.size(); ++i) {
    if (i != colon && !std::isdigit(static_cast<unsigned char>(hhmm[i]))) {
      return std::nullopt;
    }
  }
  h = std::stoi(std::string(hhmm.substr(0, colon)));
  m = std::stoi(std::string(hhmm.substr(colon + 1)));
  if (m > 59 || h > 24 || (h == 24 && m != 0)) {
    return std::nullopt;
  }
  return TimeOfDay{h * 60 + m};
}

std::string TimeOfDay::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

std::optional<Instant> Instant::parse(std::string_view text) {
  const auto space = text.find(' ');
  if (space == std::string_view::npos) {
    return std::nullopt;
  }
  const auto day = parse_weekday(text.substr(0, space));
  auto rest = text.substr(space + 1);
  while (!rest.empty() && rest.front() == ' ') {
    rest.remove_prefix(1);
  }
  const auto tod = TimeOfDay::parse(rest);
  if (!day || !tod) {
    return std::nullopt;
  }
  return Instant::at(*day, tod->minutes);
}

Weekday Instant::day() const {
  int d = static_cast<int>(std::floor(week_minutes / kMinutesPerDay));
  d = std::clamp(d, 0, 6);
  return static_cast<Weekday>(d);
}

double Instant::minute_of_day() const {
  return week_minutes - static_cast<double>(static_cast<int>(day())) * kMinutesPerDay;
}

std::string Instant::to_string() const {
  const double mod = minute_of_day();
  const int whole = static_cast<int>(std::floor(mod));
  const int secs = static_cast<int>(std::lround((mod - whole) * 60.0));
  char buf[24];
  if (secs == 0 || secs == 60) {
    const int m = whole + (secs == 60 ? 1 : 0);
    std::snprintf(buf, sizeof(buf), "%s %02d:%02d", std::string(llmap::to_string(day())).c_str(),
                  m / 60, m % 60);
  } else {
    std::snprintf(buf, sizeof(buf), "%s %02d:%02d:%02d",
                  std::string(llmap::to_string(day())).c_str(), whole / 60, whole % 60, secs);
  }
  return buf;
}

void validate(const Poi& poi) {
  if (poi.id.empty()) {
    throw std::invalid_argument("poi id must be non-empty");
  }
  if (!(poi.rating >= 1.0 && poi.rating <= 5.0)) {
    throw std::invalid_argument("poi '" + poi.id + "': rating outside [1, 5]");
  }
  if (poi.review_count < 0) {
    throw std::invalid_argument("poi '" + poi.id + "': negative review count");
  }
  if (!(poi.location.lat >= -90.0 && poi.location.lat <= 90.0) ||
      !(poi.location.lon >= -180.0 && poi.location.lon <= 180.0)) {
    throw std::invalid_argument("poi '" + poi.id + "': coordinates out of range");
  }
  for (std::size_t i = 0; i < poi.opening.size(); ++i) {
    const auto& iv = poi.opening[i];
    if (iv.open_min < 0 || iv.close_min > kMinutesPerDay || iv.open_min >= iv.close_min) {
      throw std::invalid_argument("poi '" + poi.id + "': malformed opening interval");
    }
    if (i > 0) {
      const auto& prev = poi.opening[i - 1];
      if (prev.day > iv.day || (prev.day == iv.day && prev.close_min > iv.open_min)) {
        throw std::invalid_argument("poi '" + poi.id +
                                    "': opening intervals unsorted or overlapping");
      }
    }
  }
}

std::vector<OpeningInterval> normalize_opening(std::vector<OpeningInterval> intervals) {
  std::sort(intervals.begin(), intervals.end(), [](const auto& a, const auto& b) {
    return std::pair(a.day, a.open_min) < std::pair(b.day, b.open_min);
  });
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (iv.open_min < 0 || iv.close_min > kMinutesPerDay || iv.open_min >= iv.close_min) {
      throw std::invalid_argument("malformed opening interval");
    }
    if (i > 0 && intervals[i - 1].day == iv.day && intervals[i - 1].close_min > iv.open_min) {
      throw std::invalid_argument("overlapping opening intervals on " +
                                  std::string(to_string(iv.day)));
    }
  }
  return intervals;
}

bool is_valid(const Intent& intent) {
  std::set<std::string> seen;
  for (const auto& p : intent.pois) {
    if (p.empty() || !seen.insert(p).second) {
      return false;
    }
  }
  for (const auto& d : intent.dependencies) {
    if (!seen.count(d.before) || !seen.count(d.after) || d.before == d.after) {
      return false;
    }
  }
  const auto in_unit = [](double w) { return w >= 0.0 && w <= 1.0; };
  if (!in_unit(intent.quality_weight) || !in_unit(intent.distance_weight)) {
    return false;
  }
  return std::abs(intent.quality_weight + intent.distance_weight - 1.0) <= kWeightSumTolerance;
}

double TravelConfig::visit_for(const std::string& poi_type) const {
  const auto it = visit_minutes.find(poi_type);
  return it == visit_minutes.end() ? fallback_visit_minutes : it->second;
}

double haversine_km(const LatLon& a, const LatLon& b) {
  const double dlat = radians(b.lat - a.lat);
  const double dlon = radians(b.lon - a.lon);
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(radians(a.lat)) * std::cos(radians(b.lat)) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

double travel_minutes(const LatLon& a, const LatLon& b, const TravelConfig& cfg) {
  return haversine_km(a, b) / cfg.speed_kmh * 60.0;
}

bool is_open_at(const Poi& poi, Instant instant, double stay_minutes) {
  if (!instant.within_week() || stay_minutes < 0.0) {
    return false;
  }
  const Weekday day = instant.day();
  const double start = instant.minute_of_day();
  const double finish = start + stay_minutes;
  return std::any_of(poi.opening.begin(), poi.opening.end(), [&](const OpeningInterval& iv) {
    return iv.day == day && start >= iv.open_min && finish <= iv.close_min;
  });
}

}  // namespace llmap
