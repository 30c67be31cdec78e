#include <gtest/gtest.h>

#include "llmap/core_model.hpp"

using namespace llmap;

namespace {

Poi open_poi(std::vector<OpeningInterval> opening) {
  Poi p;
  p.id = "p";
  p.poi_type = "bank";
  p.rating = 4.0;
  p.review_count = 10;
  p.location = {42.0, -71.0};
  p.opening = std::move(opening);
  return p;
}

}  // namespace

TEST(Haversine, OneDegreeOfLatitudeAtTheEquator) {
  // R * pi / 180 with R = 6371 km.
  EXPECT_DOUBLE_EQ(haversine_km({0.0, 0.0}, {1.0, 0.0}), 111.19492664455873);
}

TEST(Haversine, SymmetricAndZeroOnSamePoint) {
  const LatLon a{42.36, -71.09};
  const LatLon b{42.37, -71.01};
  EXPECT_EQ(haversine_km(a, b), haversine_km(b, a));
  EXPECT_EQ(haversine_km(a, a), 0.0);
}

TEST(TravelMinutes, ThirtyKmPerHour) {
  TravelConfig cfg;
  EXPECT_DOUBLE_EQ(travel_minutes({0.0, 0.0}, {1.0, 0.0}, cfg), 222.38985328911746);
}

TEST(TimeOfDay, ParsesAndPrints) {
  EXPECT_EQ(TimeOfDay::parse("19:00")->minutes, 1140);
  EXPECT_EQ(TimeOfDay::parse("7:05")->minutes, 425);
  EXPECT_EQ(TimeOfDay::parse("24:00")->minutes, 1440);
  EXPECT_FALSE(TimeOfDay::parse("24:01"));
  EXPECT_FALSE(TimeOfDay::parse("19"));
  EXPECT_FALSE(TimeOfDay::parse("19:60"));
  EXPECT_FALSE(TimeOfDay::parse("ab:cd"));
  EXPECT_EQ(TimeOfDay{1140}.to_string(), "19:00");
}

TEST(Instant, ParsesWeekdayAndTime) {
  const auto t = Instant::parse("Mon 10:00");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->week_minutes, 600.0);
  EXPECT_EQ(Instant::parse("wednesday 08:30")->week_minutes, 2 * 1440 + 510.0);
  EXPECT_FALSE(Instant::parse("Someday 10:00"));
  EXPECT_EQ(Instant::at(Weekday::Tue, 90).to_string(), "Tue 01:30");
  EXPECT_EQ(Instant{600.5}.to_string(), "Mon 10:00:30");
}

TEST(IsOpenAt, WholeStayMustFitOneInterval) {
  const Poi p = open_poi({{Weekday::Mon, 9 * 60, 17 * 60}});
  EXPECT_TRUE(is_open_at(p, Instant::at(Weekday::Mon, 9 * 60), 60));
  EXPECT_TRUE(is_open_at(p, Instant::at(Weekday::Mon, 16 * 60), 60));
  EXPECT_FALSE(is_open_at(p, Instant::at(Weekday::Mon, 16 * 60 + 1), 60));
  EXPECT_FALSE(is_open_at(p, Instant::at(Weekday::Mon, 8 * 60 + 59), 10));
  EXPECT_FALSE(is_open_at(p, Instant::at(Weekday::Tue, 10 * 60), 10));
}

TEST(IsOpenAt, SplitHoursDoNotBridgeTheGap) {
  const Poi p = open_poi({{Weekday::Mon, 9 * 60, 13 * 60}, {Weekday::Mon, 14 * 60, 19 * 60}});
  EXPECT_FALSE(is_open_at(p, Instant::at(Weekday::Mon, 12 * 60 + 30), 60));
  EXPECT_TRUE(is_open_at(p, Instant::at(Weekday::Mon, 14 * 60), 60));
}

TEST(IsOpenAt, OutsideTheWeekIsClosed) {
  const Poi p = open_poi({{Weekday::Sun, 0, 1440}});
  EXPECT_FALSE(is_open_at(p, Instant{kMinutesPerWeek + 1.0}, 0));
  EXPECT_FALSE(is_open_at(p, Instant{kMinutesPerWeek - 10.0}, 30));
}

TEST(Validate, RejectsBadPois) {
  Poi p = open_poi({});
  EXPECT_NO_THROW(validate(p));
  p.rating = 5.5;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = open_poi({{Weekday::Mon, 600, 500}});
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = open_poi({{Weekday::Mon, 500, 700}, {Weekday::Mon, 600, 800}});
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = open_poi({});
  p.id.clear();
  EXPECT_THROW(validate(p), std::invalid_argument);
}

TEST(NormalizeOpening, SortsAndRejectsOverlap) {
  const auto sorted = normalize_opening({{Weekday::Tue, 60, 120}, {Weekday::Mon, 60, 120}});
  EXPECT_EQ(sorted.front().day, Weekday::Mon);
  EXPECT_THROW(normalize_opening({{Weekday::Mon, 60, 120}, {Weekday::Mon, 100, 200}}),
               std::invalid_argument);
}

TEST(IntentInvariants, ChecksWeightsDepsAndDuplicates) {
  Intent ok{{"bank", "library"}, std::nullopt, {{"bank", "library"}}, 0.7, 0.3};
  EXPECT_TRUE(is_valid(ok));
  Intent dup = ok;
  dup.pois.push_back("bank");
  EXPECT_FALSE(is_valid(dup));
  Intent dangling = ok;
  dangling.dependencies.push_back({"bank", "museum"});
  EXPECT_FALSE(is_valid(dangling));
  Intent heavy = ok;
  heavy.quality_weight = 1.0;
  EXPECT_FALSE(is_valid(heavy));
}

TEST(TravelConfig, VisitDefaults) {
  TravelConfig cfg;
  EXPECT_EQ(cfg.visit_for("shopping mall"), 120);
  EXPECT_EQ(cfg.visit_for("supermarket"), 30);
  EXPECT_EQ(cfg.visit_for("pharmacy"), 15);
  EXPECT_EQ(cfg.visit_for("bank"), 20);
  EXPECT_EQ(cfg.visit_for("library"), 60);
  EXPECT_EQ(cfg.visit_for("museum"), 30);
  EXPECT_EQ(cfg.departure.to_string(), "Mon 10:00");
}
