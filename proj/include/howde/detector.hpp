#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "howde/binning.hpp"
#include "howde/model.hpp"

namespace howde {

// Least common multiple of 1..24. Per-day fractions count/bins_with_data are
// stored as integers scaled by this value so window sums stay exact.
inline constexpr std::int64_t kFractionScale = 5354228880LL;

struct LocationTally {
  LocIndex loc = kNoLocation;
  std::int64_t scaled_fraction_sum = 0;  // sum over days with data of frac * kFractionScale
  int days_visited = 0;                  // days with data on which loc holds a scope bin
  bool operator==(const LocationTally&) const = default;
};

struct WindowAggregate {
  Date anchor;
  Scope scope = Scope::kHome;
  bool anchor_has_data = false;  // the anchor day itself passes the C_hours filter
  int days_in_window_with_data = 0;
  int window_span_days = 0;           // scope-relevant days in the window
  std::vector<LocationTally> tallies;  // ascending loc, days_visited > 0

  double avg_frac(LocIndex loc) const;
  double frac_days_visited(LocIndex loc) const;
};

// First and last calendar date touched by the user's stops. Windows are
// clipped to this range.
struct ObservationSpan {
  Date first;
  Date last;
};

ObservationSpan observation_span(std::span<const HourlyDay> days);

// Aggregates the window around `anchor` from scratch. `features` must be the
// output of day_features for one user and one scope.
WindowAggregate build_window(std::span<const DayFeature> features, Date anchor, Scope scope,
                             const HowdeParams& params, ObservationSpan span);

LocationLabel detect_home(const WindowAggregate& agg, const HowdeParams& params);
LocationLabel detect_work(const WindowAggregate& agg, const HowdeParams& params);

// Full pipeline for one user: hourly binning, per-day features, rolling
// windows and selection. One DayLabel per date of the observation span.
UserLabels run_howde(const UserTrace& trace, const HowdeParams& params);

// Parallel map over users; output order equals input order.
std::vector<UserLabels> run_howde(std::span<const UserTrace> traces, const HowdeParams& params, int threads);

}  // namespace howde
