#include "howde/binning.hpp"

#include <algorithm>

#include "exact.hpp"

namespace howde {
namespace {

void add_dwell(HourDwell& bucket, LocIndex loc, Seconds secs) {
  for (auto& [l, s] : bucket.dwell) {
    if (l == loc) {
      s += secs;
      return;
    }
  }
  bucket.dwell.emplace_back(loc, secs);
}

LocIndex dominant(const HourDwell& bucket) {
  LocIndex best = kNoLocation;
  Seconds best_dwell = 0;
  for (auto [loc, secs] : bucket.dwell) {
    if (secs > best_dwell || (secs == best_dwell && loc < best)) {
      best = loc;
      best_dwell = secs;
    }
  }
  return best;
}

}  // namespace

std::vector<HourDwell> hour_dwell(const UserTrace& trace) {
  std::vector<HourDwell> out;
  // Stops are sorted and non-overlapping, so hour indices arrive in order.
  for (const Stop& stop : trace.stops) {
    const std::int64_t first = floor_div(stop.start, kSecondsPerHour);
    const std::int64_t last = floor_div(stop.end - 1, kSecondsPerHour);
    for (std::int64_t h = first; h <= last; ++h) {
      const Seconds lo = std::max(stop.start, h * kSecondsPerHour);
      const Seconds hi = std::min(stop.end, (h + 1) * kSecondsPerHour);
      if (out.empty() || out.back().hour != h) out.push_back({h, {}});
      add_dwell(out.back(), stop.loc, hi - lo);
    }
  }
  for (auto& bucket : out) std::sort(bucket.dwell.begin(), bucket.dwell.end());
  return out;
}

std::vector<HourlyDay> bin_hours(const UserTrace& trace) {
  std::vector<HourlyDay> days;
  for (const HourDwell& bucket : hour_dwell(trace)) {
    const Date date{std::chrono::days{floor_div(bucket.hour, kHoursPerDay)}};
    if (days.empty() || days.back().date != date) days.emplace_back(date);
    const auto slot = static_cast<std::size_t>(bucket.hour - floor_div(bucket.hour, kHoursPerDay) * kHoursPerDay);
    days.back().slots[slot] = dominant(bucket);
  }
  return days;
}

DayFeature day_feature(const HourlyDay& day, Scope scope, const HowdeParams& params) {
  const HourSet bins = params.windows.bins(scope);
  DayFeature f;
  f.date = day.date;
  f.scope = scope;
  f.bins_in_scope = bins.size();
  for (int h = 0; h < kHoursPerDay; ++h) {
    const LocIndex loc = day.slots[static_cast<std::size_t>(h)];
    if (!bins.contains(h) || loc == kNoLocation) continue;
    ++f.bins_with_data;
    auto it = std::find_if(f.bins_by_loc.begin(), f.bins_by_loc.end(), [&](const auto& p) { return p.first == loc; });
    if (it == f.bins_by_loc.end()) {
      f.bins_by_loc.emplace_back(loc, 1);
    } else {
      ++it->second;
    }
  }
  std::sort(f.bins_by_loc.begin(), f.bins_by_loc.end());
  f.coverage_ok = f.bins_with_data > 0 && detail::ratio_at_least(f.bins_with_data, f.bins_in_scope, params.C_hours);
  return f;
}

std::vector<DayFeature> day_features(std::span<const HourlyDay> days, Scope scope, const HowdeParams& params) {
  std::vector<DayFeature> out;
  out.reserve(days.size());
  for (const HourlyDay& day : days) {
    if (scope == Scope::kWork && !params.windows.business_days.contains(day.date)) continue;
    out.push_back(day_feature(day, scope, params));
  }
  return out;
}

double DayFeature::fraction(LocIndex loc) const {
  if (bins_with_data == 0) return 0.0;
  for (auto [l, n] : bins_by_loc) {
    if (l == loc) return static_cast<double>(n) / bins_with_data;
  }
  return 0.0;
}

std::vector<std::pair<LocIndex, double>> DayFeature::frac_by_loc() const {
  std::vector<std::pair<LocIndex, double>> out;
  out.reserve(bins_by_loc.size());
  for (auto [l, n] : bins_by_loc) out.emplace_back(l, static_cast<double>(n) / bins_with_data);
  return out;
}

}  // namespace howde
