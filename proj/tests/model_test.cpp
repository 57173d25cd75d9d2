#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "howde/model.hpp"

namespace howde {
namespace {

using testing::trace_of;

TEST(Model, MakeTraceSortsAndInternsLocations) {
  const UserTrace t = trace_of("u1", {{"B", "2019-01-01T05:00:00", "2019-01-01T06:00:00"},
                                      {"A", "2019-01-01T01:00:00", "2019-01-01T04:40:00"}});
  ASSERT_EQ(t.locations, (std::vector<std::string>{"A", "B"}));
  ASSERT_EQ(t.stops.size(), 2u);
  EXPECT_EQ(t.location(t.stops[0].loc), "A");
  EXPECT_EQ(t.find_location("B"), LocIndex{1});
  EXPECT_FALSE(t.find_location("C"));
}

TEST(Model, TouchingStopsAreAllowed) {
  EXPECT_NO_THROW(trace_of("u1", {{"A", "2019-01-01T01:00:00", "2019-01-01T04:40:00"},
                                  {"B", "2019-01-01T04:40:00", "2019-01-01T05:00:00"}}));
}

TEST(Model, OverlapNamesUserAndPair) {
  try {
    trace_of("u7", {{"A", "2019-01-01T01:00:00", "2019-01-01T04:40:00"},
                    {"B", "2019-01-01T04:00:00", "2019-01-01T05:00:00"}});
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("u7"), std::string::npos);
    EXPECT_NE(msg.find("A"), std::string::npos);
    EXPECT_NE(msg.find("B"), std::string::npos);
  }
}

TEST(Model, NonPositiveDurationRejected) {
  EXPECT_THROW(trace_of("u1", {{"A", "2019-01-01T04:00:00", "2019-01-01T04:00:00"}}), InputError);
}

TEST(Model, DefaultWindows) {
  const TimeWindows w;
  EXPECT_EQ(w.night_bins, HourSet::range(0, 6));
  EXPECT_EQ(w.business_bins.size(), 7);
  EXPECT_TRUE(w.business_bins.contains(9));
  EXPECT_FALSE(w.business_bins.contains(16));
  EXPECT_EQ(w.business_days, WeekdaySet::range(0, 5));
  EXPECT_DOUBLE_EQ(HowdeParams{}.C_hours, 0.4);
}

TEST(Model, ParamsValidation) {
  HowdeParams p;
  EXPECT_NO_THROW(p.validate());
  p.f_hours_H = 1.2;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.delta_T_H = 27;
  EXPECT_THROW(p.validate(), ConfigError);
  p.window_mode = WindowMode::kPastOnly;
  EXPECT_NO_THROW(p.validate());
  p = {};
  p.delta_T_W = -2;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.windows.night_bins = HourSet{};
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Model, EnumNamesRoundTrip) {
  for (Status s : {Status::kDetected, Status::kDayCoverage, Status::kWindowCoverage, Status::kNoCandidate,
                   Status::kNonBusinessDay}) {
    EXPECT_EQ(parse_status(to_string(s)), s);
  }
  for (WindowMode m : {WindowMode::kCentered, WindowMode::kPastOnly, WindowMode::kFullPeriod}) {
    EXPECT_EQ(parse_window_mode(to_string(m)), m);
  }
  EXPECT_EQ(parse_scope("HOME"), Scope::kHome);
  EXPECT_FALSE(parse_status("MAYBE"));
}

TEST(Model, RecordsRoundTrip) {
  const UserTrace t = trace_of("u1", {{"A", "2019-01-01T01:00:00", "2019-01-01T04:40:00"}});
  const auto records = to_records(t);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].loc_id, "A");
  EXPECT_EQ(make_trace("u1", records).stops, t.stops);
}

}  // namespace
}  // namespace howde
