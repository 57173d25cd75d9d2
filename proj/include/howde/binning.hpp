#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "howde/model.hpp"

namespace howde {

// Dwell of every location inside one absolute hour (hours since the epoch).
struct HourDwell {
  std::int64_t hour = 0;
  std::vector<std::pair<LocIndex, Seconds>> dwell;  // ascending loc, positive seconds
};

// Splits each stop at hour boundaries and sums dwell per location and hour.
std::vector<HourDwell> hour_dwell(const UserTrace& trace);

// One HourlyDay per calendar date touched by any stop. Each slot holds the
// location with the largest dwell in that hour; ties go to the smaller id.
std::vector<HourlyDay> bin_hours(const UserTrace& trace);

struct DayFeature {
  Date date;
  Scope scope = Scope::kHome;
  int bins_in_scope = 0;
  int bins_with_data = 0;
  std::vector<std::pair<LocIndex, int>> bins_by_loc;  // ascending loc, counts > 0
  bool coverage_ok = false;

  double fraction(LocIndex loc) const;
  std::vector<std::pair<LocIndex, double>> frac_by_loc() const;
};

// Fractions over the scope's bins with data. WORK features are only emitted
// for business days.
std::vector<DayFeature> day_features(std::span<const HourlyDay> days, Scope scope, const HowdeParams& params);

DayFeature day_feature(const HourlyDay& day, Scope scope, const HowdeParams& params);

}  // namespace howde
