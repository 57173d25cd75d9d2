#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "howde/detector.hpp"
#include "howde/synth.hpp"
#include "reference.hpp"

namespace howde {
namespace {

using testing::add_hours;
using testing::commuter;
using testing::day;

std::int64_t scaled(double f) { return static_cast<std::int64_t>(f * kFractionScale); }

WindowAggregate aggregate(Scope scope, int with_data, int span, std::vector<LocationTally> tallies,
                          Date anchor = day("2019-01-09")) {
  WindowAggregate a;
  a.anchor = anchor;
  a.scope = scope;
  a.anchor_has_data = true;
  a.days_in_window_with_data = with_data;
  a.window_span_days = span;
  a.tallies = std::move(tallies);
  return a;
}

TEST(BuildWindow, CenteredMeanOverDaysWithData) {
  // t-1: all night bins at A; t: half A, half B; t+1: one bin only.
  std::vector<StopRecord> r;
  const Date t = day("2019-01-09");
  add_hours(r, "u", "A", t - std::chrono::days{1}, {0, 1, 2, 3, 4, 5});
  add_hours(r, "u", "A", t, {0, 1, 2});
  add_hours(r, "u", "B", t, {3, 4, 5});
  add_hours(r, "u", "A", t + std::chrono::days{1}, {0});
  const UserTrace trace = make_trace("u", r);
  HowdeParams p;
  p.delta_T_H = 2;
  const auto days = bin_hours(trace);
  const auto features = day_features(days, Scope::kHome, p);
  const WindowAggregate agg = build_window(features, t, Scope::kHome, p, observation_span(days));
  EXPECT_EQ(agg.days_in_window_with_data, 2);
  EXPECT_EQ(agg.window_span_days, 3);
  EXPECT_TRUE(agg.anchor_has_data);
  EXPECT_DOUBLE_EQ(agg.avg_frac(*trace.find_location("A")), 0.75);
  EXPECT_DOUBLE_EQ(agg.frac_days_visited(*trace.find_location("B")), 0.5);
}

TEST(BuildWindow, ZeroDeltaIsTheAnchorDay) {
  const UserTrace trace = commuter("u", day("2019-01-07"), 14);
  HowdeParams p;
  p.delta_T_H = 0;
  const auto days = bin_hours(trace);
  const auto features = day_features(days, Scope::kHome, p);
  const WindowAggregate agg = build_window(features, day("2019-01-10"), Scope::kHome, p, observation_span(days));
  EXPECT_EQ(agg.window_span_days, 1);
  EXPECT_EQ(agg.days_in_window_with_data, 1);
  EXPECT_DOUBLE_EQ(agg.avg_frac(*trace.find_location("H")), 1.0);
}

TEST(BuildWindow, WorkSpanCountsBusinessDays) {
  const UserTrace trace = commuter("u", day("2019-01-07"), 21);
  HowdeParams p;
  p.delta_T_W = 4;
  const auto days = bin_hours(trace);
  const auto features = day_features(days, Scope::kWork, p);
  // Friday 2019-01-18: Wed, Thu, Fri, Mon, Tue.
  const WindowAggregate agg = build_window(features, day("2019-01-18"), Scope::kWork, p, observation_span(days));
  EXPECT_EQ(agg.window_span_days, 5);
  EXPECT_EQ(agg.days_in_window_with_data, 5);
}

TEST(BuildWindow, PastOnlyAndFullPeriod) {
  const UserTrace trace = commuter("u", day("2019-01-07"), 28);
  HowdeParams p;
  p.delta_T_H = 6;
  p.window_mode = WindowMode::kPastOnly;
  const auto days = bin_hours(trace);
  const auto features = day_features(days, Scope::kHome, p);
  const auto span = observation_span(days);
  EXPECT_EQ(build_window(features, day("2019-01-20"), Scope::kHome, p, span).window_span_days, 7);
  EXPECT_EQ(build_window(features, day("2019-01-09"), Scope::kHome, p, span).window_span_days, 3);
  p.window_mode = WindowMode::kFullPeriod;
  EXPECT_EQ(build_window(features, day("2019-01-09"), Scope::kHome, p, span).window_span_days, 28);
}

TEST(DetectHome, SingleQualifier) {
  HowdeParams p;
  p.f_hours_H = 0.6;
  const auto agg = aggregate(Scope::kHome, 10, 10, {{0, scaled(0.8) * 10, 10}, {1, scaled(0.5) * 10, 10}});
  EXPECT_EQ(detect_home(agg, p), LocationLabel::found(0));
}

TEST(DetectHome, NoCandidate) {
  HowdeParams p;
  p.f_hours_H = 0.5;
  const auto agg = aggregate(Scope::kHome, 10, 10, {{0, scaled(0.4) * 10, 10}});
  EXPECT_EQ(detect_home(agg, p), LocationLabel::undetected(Status::kNoCandidate));
}

TEST(DetectHome, CoverageGatePrecedesSelection) {
  HowdeParams p;
  p.C_days_H = 0.5;
  const auto agg = aggregate(Scope::kHome, 3, 10, {{0, scaled(1.0) * 3, 3}});
  EXPECT_EQ(detect_home(agg, p), LocationLabel::undetected(Status::kWindowCoverage));
}

TEST(DetectHome, AnchorWithoutDataIsDayCoverage) {
  auto agg = aggregate(Scope::kHome, 10, 10, {{0, scaled(1.0) * 10, 10}});
  agg.anchor_has_data = false;
  EXPECT_EQ(detect_home(agg, HowdeParams{}), LocationLabel::undetected(Status::kDayCoverage));
}

TEST(DetectHome, TiesPreferMoreDaysThenSmallerId) {
  HowdeParams p;
  p.f_hours_H = 0.3;
  // Equal sums (0.5 avg), B visited on more days.
  auto agg = aggregate(Scope::kHome, 4, 4, {{0, scaled(0.5) * 4, 2}, {1, scaled(0.5) * 4, 4}});
  EXPECT_EQ(detect_home(agg, p), LocationLabel::found(1));
  agg.tallies[0].days_visited = 4;
  EXPECT_EQ(detect_home(agg, p), LocationLabel::found(0));
}

TEST(DetectWork, DaysRankingDominates) {
  HowdeParams p;
  p.f_hours_W = 0.4;
  p.f_days_W = 0.8;
  const auto agg = aggregate(Scope::kWork, 10, 10, {{0, scaled(0.7) * 10, 9}, {1, scaled(0.75) * 10, 6}});
  EXPECT_EQ(detect_work(agg, p), LocationLabel::found(0));
}

TEST(DetectWork, HoursFallback) {
  HowdeParams p;
  p.f_hours_W = 0.4;
  p.f_days_W = 0.8;
  const auto agg = aggregate(Scope::kWork, 10, 10, {{0, scaled(0.7) * 10, 5}});
  EXPECT_EQ(detect_work(agg, p), LocationLabel::found(0));
}

TEST(DetectWork, NoCandidateAndNonBusinessDay) {
  HowdeParams p;
  const auto agg = aggregate(Scope::kWork, 10, 10, {{0, scaled(0.3) * 10, 10}});
  EXPECT_EQ(detect_work(agg, p), LocationLabel::undetected(Status::kNoCandidate));
  const auto saturday = aggregate(Scope::kWork, 10, 10, {{0, scaled(1.0) * 10, 10}}, day("2019-01-12"));
  EXPECT_EQ(detect_work(saturday, p), LocationLabel::undetected(Status::kNonBusinessDay));
}

TEST(RunHowde, NoiselessCommuterInteriorDays) {
  const UserTrace trace = commuter("u", day("2019-01-07"), 120);
  HowdeParams p;
  p.delta_T_H = p.delta_T_W = 28;
  p.f_hours_H = 0.9;
  p.f_days_W = 0.9;
  const UserLabels labels = run_howde(trace, p);
  ASSERT_EQ(labels.days.size(), 120u);
  for (std::size_t i = 14; i + 14 < labels.days.size(); ++i) {
    const DayLabel& d = labels.days[i];
    EXPECT_EQ(labels.location(d.home.loc), "H");
    if (weekday_index(d.date) < 5) {
      ASSERT_TRUE(d.work.detected());
      EXPECT_EQ(labels.location(d.work.loc), "W");
    } else {
      EXPECT_EQ(d.work.status, Status::kNonBusinessDay);
    }
  }
}

TEST(RunHowde, ScopesAreIndependent) {
  std::vector<StopRecord> r;
  for (int i = 0; i < 30; ++i) {
    const Date d = day("2019-01-07") + std::chrono::days{i};
    if (weekday_index(d) < 5) add_hours(r, "u", "W", d, {9, 10, 11, 12, 13, 14, 15});
  }
  const UserLabels labels = run_howde(make_trace("u", r), HowdeParams{});
  for (const DayLabel& d : labels.days) {
    EXPECT_TRUE(d.home.status == Status::kDayCoverage || d.home.status == Status::kWindowCoverage);
    if (weekday_index(d.date) < 5) {
      EXPECT_TRUE(d.work.detected());
    }
  }
}

TEST(RunHowde, MaxConfigRejectsEightyPercentHome) {
  // Home in 4 of 5 night bins every night; the fifth bin elsewhere.
  std::vector<StopRecord> r;
  for (int i = 0; i < 60; ++i) {
    const Date d = day("2019-01-07") + std::chrono::days{i};
    add_hours(r, "u", "H", d, {0, 1, 2, 3});
    add_hours(r, "u", "X", d, {4});
  }
  HowdeParams p;
  p.delta_T_H = 28;
  p.f_hours_H = 0.9;
  const UserLabels labels = run_howde(make_trace("u", r), p);
  for (const DayLabel& d : labels.days) EXPECT_EQ(d.home.status, Status::kNoCandidate);
  p.f_hours_H = 0.8;
  for (const DayLabel& d : run_howde(make_trace("u", r), p).days) EXPECT_TRUE(d.home.detected());
}

TEST(RunHowde, EmptyTrace) {
  UserTrace t;
  t.user_id = "u";
  EXPECT_TRUE(run_howde(t, HowdeParams{}).days.empty());
}

std::vector<UserTrace> small_population(std::uint64_t seed, double missing) {
  PopulationSpec s;
  s.users = 12;
  s.days = 70;
  s.seed = seed;
  s.missing_rate_min = s.missing_rate_max = missing;
  s.multi_home_share = 0.3;
  s.move_share = 0.3;
  s.job_change_share = 0.3;
  s.mix = {0.8, 0.1, 0.05, 0.05};
  return generate_population(make_population(s), 1).traces;
}

HowdeParams random_params(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> half(0, 20);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::uniform_int_distribution<int> mode(0, 2);
  auto grid = [&](double x) { return std::round(x * 20) / 20; };  // favour exact boundary hits
  HowdeParams p;
  p.window_mode = static_cast<WindowMode>(mode(rng));
  p.delta_T_H = 2 * half(rng);
  p.delta_T_W = 2 * half(rng);
  p.C_hours = grid(frac(rng) * 0.8);
  p.C_days_H = grid(frac(rng) * 0.8);
  p.C_days_W = grid(frac(rng) * 0.8);
  p.f_hours_H = grid(frac(rng));
  p.f_hours_W = frac(rng);
  p.f_days_W = grid(frac(rng));
  return p;
}

TEST(RunHowde, MatchesReferenceOnRandomInputs) {
  std::mt19937_64 rng(99);
  for (double missing : {0.0, 0.3, 0.7}) {
    const auto traces = small_population(static_cast<std::uint64_t>(missing * 10) + 1, missing);
    for (int c = 0; c < 4; ++c) {
      const HowdeParams p = random_params(rng);
      for (const UserTrace& t : traces) {
        ASSERT_TRUE(same_labels(run_howde(t, p), testing::reference_howde(t, p)))
            << t.user_id << " missing=" << missing << " config=" << c;
      }
    }
  }
}

TEST(RunHowde, RaisingHomeThresholdOnlyRemovesDetections) {
  const auto traces = small_population(5, 0.3);
  HowdeParams lo;
  lo.f_hours_H = 0.5;
  HowdeParams hi = lo;
  hi.f_hours_H = 0.8;
  for (const UserTrace& t : traces) {
    const UserLabels a = run_howde(t, lo);
    const UserLabels b = run_howde(t, hi);
    ASSERT_EQ(a.days.size(), b.days.size());
    for (std::size_t i = 0; i < a.days.size(); ++i) {
      if (b.days[i].home.detected()) {
        ASSERT_TRUE(a.days[i].home.detected());
        ASSERT_EQ(a.days[i].home.loc, b.days[i].home.loc);
      }
    }
  }
}

TEST(RunHowde, WindowLocality) {
  const UserTrace base = commuter("u", day("2019-01-07"), 60);
  UserTrace changed = base;
  // Replace the last week's nights with another location.
  changed.locations = {"H", "W", "Z"};
  for (Stop& s : changed.stops) {
    if (date_of(s.start) >= day("2019-02-28")) s.loc = 2;
  }
  HowdeParams p;
  p.delta_T_H = 10;
  const UserLabels a = run_howde(base, p);
  const UserLabels b = run_howde(changed, p);
  for (std::size_t i = 0; i < a.days.size(); ++i) {
    if (a.days[i].date + std::chrono::days{5} < day("2019-02-28")) {
      EXPECT_EQ(a.days[i].home, b.days[i].home) << format_date(a.days[i].date);
    }
  }
}

TEST(RunHowde, ScaleInvarianceOverSparsity) {
  // Same per-day proportions with half the bins observed.
  std::vector<StopRecord> dense, sparse;
  for (int i = 0; i < 40; ++i) {
    const Date d = day("2019-01-07") + std::chrono::days{i};
    add_hours(dense, "u", "H", d, {0, 1, 2, 3});
    add_hours(dense, "u", "B", d, {4, 5});
    add_hours(sparse, "u", "H", d, {0, 1});
    add_hours(sparse, "u", "B", d, {4});
  }
  HowdeParams p;
  p.C_hours = 0.3;
  p.f_hours_H = 0.6;
  const UserLabels a = run_howde(make_trace("u", dense), p);
  const UserLabels b = run_howde(make_trace("u", sparse), p);
  EXPECT_TRUE(same_labels(a, b));
}

TEST(RunHowde, ParallelMatchesSequential) {
  const auto traces = small_population(8, 0.2);
  const auto one = run_howde(traces, HowdeParams{}, 1);
  const auto many = run_howde(traces, HowdeParams{}, 4);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_TRUE(same_labels(one[i], many[i]));
}

}  // namespace
}  // namespace howde
