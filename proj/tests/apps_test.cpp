#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "howde/apps.hpp"

namespace howde {
namespace {

LocationCoords at(double lat, double lon, std::string id = "") { return {std::move(id), lat, lon, std::nullopt}; }

// Work labels from `codes` starting 2019-01-01: '.' undetected, a letter
// names the location. Home is always "H".
UserLabels work_labels(const std::string& user, const std::string& codes) {
  UserLabels u;
  u.user_id = user;
  u.locations = {"H"};
  for (char c : codes) {
    if (c != '.' && std::find(u.locations.begin(), u.locations.end(), std::string(1, c)) == u.locations.end()) {
      u.locations.emplace_back(1, c);
    }
  }
  std::sort(u.locations.begin(), u.locations.end());
  auto index = [&](const std::string& s) {
    return static_cast<LocIndex>(std::find(u.locations.begin(), u.locations.end(), s) - u.locations.begin());
  };
  const Date first = testing::day("2019-01-01");
  for (std::size_t i = 0; i < codes.size(); ++i) {
    DayLabel d;
    d.date = first + std::chrono::days{static_cast<int>(i)};
    d.home = LocationLabel::found(index("H"));
    d.work = codes[i] == '.' ? LocationLabel::undetected(Status::kNoCandidate)
                             : LocationLabel::found(index(std::string(1, codes[i])));
    u.days.push_back(d);
  }
  return u;
}

TEST(Haversine, KnownDistances) {
  EXPECT_EQ(haversine_km(at(10, 20), at(10, 20)), 0.0);
  EXPECT_NEAR(haversine_km(at(0, 0), at(0, 180)), 20015.1144, 1e-3);
  EXPECT_NEAR(haversine_km(at(48.8566, 2.3522), at(51.5074, -0.1278)), 343.5565, 1e-3);
}

TEST(Haversine, SymmetryAndTriangleInequality) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int i = 0; i < 500; ++i) {
    const auto a = at(lat(rng), lon(rng)), b = at(lat(rng), lon(rng)), c = at(lat(rng), lon(rng));
    EXPECT_DOUBLE_EQ(haversine_km(a, b), haversine_km(b, a));
    EXPECT_LE(haversine_km(a, c), haversine_km(a, b) + haversine_km(b, c) + 1e-9);
  }
}

TEST(Employment, StableSpans) {
  EXPECT_TRUE(has_stable_work(work_labels("u", std::string(40, 'A')), 30));
  EXPECT_FALSE(has_stable_work(work_labels("u", std::string(20, 'A') + std::string(20, 'B')), 30));
  EXPECT_TRUE(has_stable_work(work_labels("u", std::string(15, 'A') + "...." + std::string(16, 'A')), 30));
  EXPECT_FALSE(has_stable_work(work_labels("u", std::string(15, 'A') + "..B." + std::string(16, 'A')), 30));
  EXPECT_FALSE(has_stable_work(work_labels("u", std::string(40, '.')), 30));
  EXPECT_TRUE(has_stable_work(work_labels("u", "A"), 1));
}

TEST(Employment, MonotoneInThreshold) {
  std::mt19937_64 rng(3);
  std::vector<UserLabels> users;
  std::map<std::string, std::string> region;
  for (int u = 0; u < 60; ++u) {
    std::string codes;
    for (int d = 0; d < 80; ++d) codes += "AAAB."[rng() % 5];
    users.push_back(work_labels("u" + std::to_string(u), codes));
    region[users.back().user_id] = u % 2 ? "r1" : "r2";
  }
  region["ghost"] = "r1";
  double previous = 1.0;
  for (int t = 1; t <= 60; t += 3) {
    const EmploymentResult r = employment_rate(users, region, t);
    ASSERT_EQ(r.regions.size(), 2u);
    EXPECT_EQ(r.regions[0].users, 31u);  // includes the unlabelled user
    const double total = static_cast<double>(r.regions[0].employed + r.regions[1].employed);
    EXPECT_LE(total / 61.0, previous);
    previous = total / 61.0;
  }
  users.push_back(work_labels("nobody", "AAAA"));
  EXPECT_EQ(employment_rate(users, region, 1).users_without_region, 1u);
}

TEST(Employment, HomeRegions) {
  std::vector<UserLabels> users = {work_labels("a", "AA"), work_labels("b", "AA")};
  CoordinateTable coords;
  coords["H"] = {"H", 1, 1, std::string("R7")};
  EXPECT_EQ(home_regions(users, coords), (std::map<std::string, std::string>{{"a", "R7"}, {"b", "R7"}}));
  coords["H"].region_id.reset();
  EXPECT_TRUE(home_regions(users, coords).empty());
}

TEST(Commute, PlantedGroups) {
  CoordinateTable coords;
  coords["H"] = at(55.0, 12.0, "H");
  const double km_per_deg = haversine_km(at(55.0, 12.0), at(56.0, 12.0));
  coords["A"] = at(55.0 + 2.0 / km_per_deg, 12.0, "A");
  coords["B"] = at(55.0 + 6.0 / km_per_deg, 12.0, "B");
  std::vector<UserLabels> users;
  std::map<std::string, std::string> group;
  for (int u = 0; u < 10; ++u) {
    const bool near = u < 5;
    users.push_back(work_labels("u" + std::to_string(u), std::string(10, near ? 'A' : 'B') + "..."));
    group[users.back().user_id] = near ? "near" : "far";
  }
  users.push_back(work_labels("z", "C"));
  group["z"] = "near";
  users.push_back(work_labels("loner", "A"));
  const CommuteResult r = commute_stats(users, coords, group);
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_EQ(r.groups[0].group, "far");
  EXPECT_NEAR(r.groups[0].mean_km, 6.0, 1e-6);
  EXPECT_NEAR(r.groups[1].mean_km, 2.0, 1e-6);
  EXPECT_EQ(r.groups[1].users, 5u);
  EXPECT_NEAR(r.groups[1].stderr_km, 0.0, 1e-9);
  EXPECT_EQ(r.days_missing_coords, 1u);
  EXPECT_EQ(r.users_without_group, 1u);
}

TEST(Reference, Correlation) {
  const std::map<std::string, double> ref = {{"a", 0.1}, {"b", 0.2}, {"c", 0.4}};
  EXPECT_NEAR(compare_to_reference(ref, ref).pearson_r, 1.0, 1e-12);
  EXPECT_EQ(compare_to_reference(ref, ref).mean_relative_error, 0.0);
  const std::map<std::string, double> shifted = {{"a", 0.3}, {"b", 0.4}, {"c", 0.6}, {"zz", 9}};
  const ReferenceComparison s = compare_to_reference(shifted, ref);
  EXPECT_NEAR(s.pearson_r, 1.0, 1e-12);
  EXPECT_EQ(s.regions_compared, 3u);
  const std::map<std::string, double> reversed = {{"a", 0.4}, {"b", 0.3}, {"c", 0.2}};
  const std::map<std::string, double> linear = {{"a", 0.1}, {"b", 0.2}, {"c", 0.3}};
  EXPECT_NEAR(compare_to_reference(reversed, linear).pearson_r, -1.0, 1e-12);
  const std::map<std::string, double> with_zero = {{"a", 0.0}, {"b", 0.2}, {"c", 0.4}};
  const ReferenceComparison z = compare_to_reference(ref, with_zero);
  EXPECT_EQ(z.zero_reference_excluded, 1u);
  EXPECT_NEAR(z.mean_relative_error, 0.0, 1e-12);
  EXPECT_THROW(compare_to_reference({{"a", 1.0}}, ref), std::invalid_argument);
}

}  // namespace
}  // namespace howde
