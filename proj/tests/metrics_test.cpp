#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "howde/metrics.hpp"

namespace howde {
namespace {

using testing::day;

// Labels with one home label per day from `codes`: '.' undetected, else the
// location named by the character.
UserLabels labels_of(const std::string& user, Date first, const std::string& codes) {
  UserLabels u;
  u.user_id = user;
  for (char c : codes) {
    if (c != '.') u.locations.emplace_back(1, c);
  }
  std::sort(u.locations.begin(), u.locations.end());
  u.locations.erase(std::unique(u.locations.begin(), u.locations.end()), u.locations.end());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    DayLabel d;
    d.date = first + std::chrono::days{static_cast<int>(i)};
    if (codes[i] == '.') {
      d.home = LocationLabel::undetected(Status::kNoCandidate);
    } else {
      const auto it = std::lower_bound(u.locations.begin(), u.locations.end(), std::string(1, codes[i]));
      d.home = LocationLabel::found(static_cast<LocIndex>(it - u.locations.begin()));
    }
    d.work = LocationLabel::undetected(Status::kNoCandidate);
    u.days.push_back(d);
  }
  return u;
}

std::vector<KeyOutcome> outcomes(int n, int detected, int matched) {
  std::vector<KeyOutcome> out(static_cast<std::size_t>(n));
  for (int i = 0; i < detected; ++i) out[static_cast<std::size_t>(i)] = {true, i < matched};
  return out;
}

TEST(Metrics, Formulas) {
  const PointMetrics m = point_metrics(outcomes(100, 90, 85));
  EXPECT_EQ(m.n_truth, 100u);
  EXPECT_EQ(m.n_detected, 90u);
  EXPECT_EQ(m.n_matched, 85u);
  EXPECT_DOUBLE_EQ(m.frac_not_detected, 1.0 - 90.0 / 100.0);
  EXPECT_DOUBLE_EQ(m.detected_accuracy, 85.0 / 90.0);
  const PointMetrics all = point_metrics(outcomes(7, 7, 7));
  EXPECT_EQ(all.frac_not_detected, 0.0);
  EXPECT_EQ(all.detected_accuracy, 1.0);
  EXPECT_TRUE(std::isnan(point_metrics(outcomes(3, 0, 0)).detected_accuracy));
}

TEST(Metrics, WeeklyLabelIsModalWithSmallerIdOnTies) {
  const Date mon = day("2019-01-07");
  EXPECT_EQ(weekly_label(labels_of("u", mon, "AABBB.."), Scope::kHome, {2019, 2}), 1u);
  EXPECT_EQ(weekly_label(labels_of("u", mon, "BBAA..."), Scope::kHome, {2019, 2}), 0u);
  EXPECT_EQ(weekly_label(labels_of("u", mon, "......."), Scope::kHome, {2019, 2}), kNoLocation);
  EXPECT_EQ(weekly_label(labels_of("u", mon, "AAAAAAA"), Scope::kHome, {2019, 3}), kNoLocation);
}

TEST(Metrics, UserWeekMatching) {
  const Date mon = day("2019-01-07");
  const std::vector<UserLabels> labels = {labels_of("u1", mon, "AAAAAAABBBBBBB.............."),
                                          labels_of("u2", mon, "CCCCCCC")};
  GroundTruth truth{Scope::kHome, Granularity::kUserWeek,
                    {{"u1", IsoWeek{2019, 2}, {"A"}},
                     {"u1", IsoWeek{2019, 3}, {"A"}},
                     {"u1", IsoWeek{2019, 4}, {"A"}},
                     {"u2", IsoWeek{2019, 2}, {"C"}},
                     {"u3", IsoWeek{2019, 2}, {"Z"}}}};
  const auto k = match_keys(labels, truth);
  ASSERT_EQ(k.size(), 5u);
  EXPECT_TRUE(k[0].detected && k[0].matched);
  EXPECT_TRUE(k[1].detected && !k[1].matched);
  EXPECT_FALSE(k[2].detected);
  EXPECT_TRUE(k[3].matched);
  EXPECT_FALSE(k[4].detected);  // user without labels
  const PointMetrics m = point_metrics(k);
  EXPECT_DOUBLE_EQ(m.frac_not_detected, 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(m.detected_accuracy, 2.0 / 3.0);
}

TEST(Metrics, UserLevelMultiHomeRule) {
  const Date mon = day("2019-01-07");
  const std::vector<UserLabels> labels = {labels_of("u1", mon, "..BB.."), labels_of("u2", mon, "XXXXXC"),
                                          labels_of("u3", mon, "XXXX"), labels_of("u4", mon, "....")};
  GroundTruth truth{Scope::kHome, Granularity::kUser,
                    {{"u1", std::nullopt, {"A", "B"}},
                     {"u2", std::nullopt, {"C", "D"}},
                     {"u3", std::nullopt, {"A", "B"}},
                     {"u4", std::nullopt, {"A"}}}};
  const auto k = match_keys(labels, truth);
  EXPECT_TRUE(k[0].matched);   // B is one of the annotated homes
  EXPECT_TRUE(k[1].matched);   // any detected label of the period counts
  EXPECT_TRUE(k[2].detected && !k[2].matched);
  EXPECT_FALSE(k[3].detected);
}

TEST(Metrics, DisjointUsersAreAProtocolError) {
  const std::vector<UserLabels> labels = {labels_of("u1", day("2019-01-07"), "AAA")};
  GroundTruth truth{Scope::kHome, Granularity::kUser, {{"other", std::nullopt, {"A"}}}};
  EXPECT_THROW(match_keys(labels, truth), ProtocolError);
}

TEST(Metrics, InvariantUnderKeyPermutation) {
  std::vector<KeyOutcome> o = outcomes(50, 40, 31);
  const PointMetrics a = point_metrics(o);
  std::mt19937 rng(4);
  std::shuffle(o.begin(), o.end(), rng);
  const PointMetrics b = point_metrics(o);
  EXPECT_EQ(a.detected_accuracy, b.detected_accuracy);
  EXPECT_EQ(a.frac_not_detected, b.frac_not_detected);
}

TEST(Metrics, IdentityResampleReproducesPointEstimate) {
  const auto o = outcomes(40, 30, 20);
  std::vector<std::size_t> identity(o.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  const PointMetrics a = point_metrics(o, identity);
  const PointMetrics b = point_metrics(o);
  EXPECT_EQ(a.detected_accuracy, b.detected_accuracy);
  EXPECT_EQ(a.frac_not_detected, b.frac_not_detected);
}

TEST(Metrics, BootstrapIsSeededAndThreadIndependent) {
  const auto o = outcomes(200, 150, 120);
  const BootstrapSummary a = bootstrap(o, 300, 17, 1);
  const BootstrapSummary b = bootstrap(o, 300, 17, 4);
  EXPECT_EQ(a.acc_stddev, b.acc_stddev);
  EXPECT_EQ(a.fnd_ci_high, b.fnd_ci_high);
  EXPECT_GT(a.acc_stddev, 0.0);
  // Binomial standard error of f_ND = 0.25 over 200 keys is about 0.031.
  EXPECT_NEAR(a.fnd_stddev, std::sqrt(0.25 * 0.75 / 200), 0.008);
  EXPECT_LE(a.acc_ci_low, 0.8);
  EXPECT_GE(a.acc_ci_high, 0.8);
  const BootstrapSummary c = bootstrap(o, 300, 18, 1);
  EXPECT_NE(a.acc_stddev, c.acc_stddev);
}

TEST(Metrics, ConstantOutcomesHaveNoSpread) {
  const BootstrapSummary s = bootstrap(outcomes(30, 30, 30), 50, 1, 1);
  EXPECT_EQ(s.acc_stddev, 0.0);
  EXPECT_EQ(s.fnd_stddev, 0.0);
}

TEST(Metrics, AlwaysAssigningDetectorHasZeroFnd) {
  const Date mon = day("2019-01-07");
  const std::vector<UserLabels> labels = {labels_of("u1", mon, std::string(14, 'A')),
                                          labels_of("u2", mon, std::string(14, 'B'))};
  GroundTruth truth{Scope::kHome, Granularity::kUserWeek,
                    {{"u1", IsoWeek{2019, 2}, {"A"}},
                     {"u1", IsoWeek{2019, 3}, {"A"}},
                     {"u2", IsoWeek{2019, 2}, {"A"}},
                     {"u2", IsoWeek{2019, 3}, {"B"}}}};
  const EvalReport r = evaluate(labels, truth, 100, 3);
  EXPECT_EQ(r.point.frac_not_detected, 0.0);
  EXPECT_DOUBLE_EQ(r.point.detected_accuracy, 0.75);
  EXPECT_EQ(r.spread.replicates, 100);
}

TEST(Prefilter, DaysWithData) {
  std::vector<StopRecord> a, b;
  for (int i = 0; i < 12; ++i) testing::add_hours(a, "a", "H", day("2019-01-01") + std::chrono::days{i}, {3});
  for (int i = 0; i < 9; ++i) testing::add_hours(b, "b", "H", day("2019-01-01") + std::chrono::days{i}, {3});
  const std::vector<UserTrace> traces = {make_trace("a", a), make_trace("b", b)};
  EXPECT_EQ(prefilter_users(traces, 10), std::vector<std::string>{"a"});
  EXPECT_EQ(prefilter_users(traces, 0), (std::vector<std::string>{"a", "b"}));
}

}  // namespace
}  // namespace howde
