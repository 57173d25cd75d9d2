#include "howde/baselines.hpp"

#include <algorithm>
#include <set>

namespace howde {
namespace {

// Calls fn(date, hour, seconds) for every hour-aligned piece of a stop.
template <typename Fn>
void for_each_hour_piece(const Stop& stop, Fn&& fn) {
  const std::int64_t first = floor_div(stop.start, kSecondsPerHour);
  const std::int64_t last = floor_div(stop.end - 1, kSecondsPerHour);
  for (std::int64_t h = first; h <= last; ++h) {
    const Seconds lo = std::max(stop.start, h * kSecondsPerHour);
    const Seconds hi = std::min(stop.end, (h + 1) * kSecondsPerHour);
    const std::int64_t day = floor_div(h, kHoursPerDay);
    fn(Date{std::chrono::days{day}}, static_cast<int>(h - day * kHoursPerDay), hi - lo);
  }
}

LocIndex argmax(const std::vector<std::int64_t>& score) {
  LocIndex best = kNoLocation;
  std::int64_t best_score = 0;
  for (std::size_t l = 0; l < score.size(); ++l) {
    if (score[l] > best_score) {
      best_score = score[l];
      best = static_cast<LocIndex>(l);
    }
  }
  return best;
}

HourSet atlas_night(const AtlasOptions& o) {
  return o.windows == BaselineWindows::kNative ? HourSet::range(22, 24) | HourSet::range(0, 6) : o.shared.night_bins;
}

HourSet atlas_business(const AtlasOptions& o) {
  return o.windows == BaselineWindows::kNative ? HourSet::range(9, 16) : o.shared.business_bins;
}

bool timegeo_home_hour(Date d, int hour, const TimeGeoOptions& o) {
  const WeekdaySet& weekdays = o.shared.business_days;
  if (!weekdays.contains(d)) return true;  // weekends count in full
  if (o.windows == BaselineWindows::kHarmonized) return o.shared.night_bins.contains(hour);
  // Weekday nights run 19:00-08:00 and belong to the date they start on.
  if (hour >= 19) return true;
  return hour < 8 && weekdays.contains(d - std::chrono::days{1});
}

bool timegeo_work_hour(Date d, int hour, const TimeGeoOptions& o) {
  if (!o.shared.business_days.contains(d)) return false;
  if (o.windows == BaselineWindows::kHarmonized) return o.shared.business_bins.contains(hour);
  return hour >= 8 && hour < 19;
}

template <typename InWindow>
std::vector<std::int64_t> visit_counts(const UserTrace& trace, InWindow&& in_window) {
  std::vector<std::int64_t> visits(trace.locations.size(), 0);
  for (const Stop& s : trace.stops) {
    bool hit = false;
    for_each_hour_piece(s, [&](Date d, int h, Seconds) { hit = hit || in_window(d, h); });
    if (hit) ++visits[s.loc];
  }
  return visits;
}

}  // namespace

LocIndex atlas_home(const UserTrace& trace, const AtlasOptions& opts) {
  const HourSet night = atlas_night(opts);
  std::vector<std::int64_t> dwell(trace.locations.size(), 0);
  for (const Stop& s : trace.stops) {
    for_each_hour_piece(s, [&](Date, int h, Seconds secs) {
      if (night.contains(h)) dwell[s.loc] += secs;
    });
  }
  return argmax(dwell);
}

LocIndex atlas_work(const UserTrace& trace, const AtlasOptions& opts) {
  const HourSet business = atlas_business(opts);
  std::vector<std::int64_t> dwell(trace.locations.size(), 0);
  for (const Stop& s : trace.stops) {
    for_each_hour_piece(s, [&](Date d, int h, Seconds secs) {
      if (business.contains(h) && opts.shared.business_days.contains(d)) dwell[s.loc] += secs;
    });
  }
  return argmax(dwell);
}

BaselineResult run_atlas(const UserTrace& trace, const AtlasOptions& opts) {
  BaselineResult r;
  r.user_id = trace.user_id;
  r.home = atlas_home(trace, opts);
  r.work = atlas_work(trace, opts);
  if (r.home != kNoLocation) {
    // A night is attributed to the date it starts on.
    const HourSet night = atlas_night(opts);
    std::set<std::int64_t> nights;
    for (const Stop& s : trace.stops) {
      if (s.loc != r.home) continue;
      for_each_hour_piece(s, [&](Date d, int h, Seconds) {
        if (night.contains(h)) nights.insert(day_number(d) - (h < 12 ? 1 : 0));
      });
    }
    r.qualifies = static_cast<int>(nights.size()) >= opts.min_nights;
  }
  return r;
}

LocIndex timegeo_home(const UserTrace& trace, const TimeGeoOptions& opts) {
  if (static_cast<int>(trace.stops.size()) < opts.min_total_stops) return kNoLocation;
  const auto visits = visit_counts(trace, [&](Date d, int h) { return timegeo_home_hour(d, h, opts); });
  const LocIndex best = argmax(visits);
  if (best == kNoLocation || visits[best] < opts.min_home_stays) return kNoLocation;
  return best;
}

TimeGeoWork timegeo_work(const UserTrace& trace, LocIndex home, const CoordinateTable& coords,
                         const TimeGeoOptions& opts) {
  TimeGeoWork out;
  if (home == kNoLocation) return out;
  const auto visits = visit_counts(trace, [&](Date d, int h) { return timegeo_work_hour(d, h, opts); });
  std::vector<LocIndex> order;
  for (std::size_t l = 0; l < visits.size(); ++l) {
    if (visits[l] >= opts.min_work_visits && l != home) order.push_back(static_cast<LocIndex>(l));
  }
  std::stable_sort(order.begin(), order.end(), [&](LocIndex a, LocIndex b) { return visits[a] > visits[b]; });
  const auto home_xy = coords.find(std::string(trace.location(home)));
  for (LocIndex cand : order) {
    const auto xy = coords.find(std::string(trace.location(cand)));
    if (home_xy == coords.end() || xy == coords.end()) {
      ++out.skipped_candidates;
      continue;
    }
    if (haversine_km(home_xy->second, xy->second) > opts.min_work_distance_km) {
      out.loc = cand;
      break;
    }
  }
  return out;
}

BaselineResult run_timegeo(const UserTrace& trace, const CoordinateTable& coords, const TimeGeoOptions& opts) {
  BaselineResult r;
  r.user_id = trace.user_id;
  r.home = timegeo_home(trace, opts);
  r.qualifies = r.home != kNoLocation;
  const TimeGeoWork w = timegeo_work(trace, r.home, coords, opts);
  r.work = w.loc;
  r.skipped_candidates = w.skipped_candidates;
  return r;
}

UserLabels baseline_labels(const UserTrace& trace, const BaselineResult& result, const TimeWindows& windows) {
  UserLabels out;
  out.user_id = trace.user_id;
  out.locations = trace.locations;
  if (trace.stops.empty()) return out;
  const Date first = date_of(trace.stops.front().start);
  const Date last = date_of(trace.stops.back().end - 1);
  auto label = [](LocIndex l) {
    return l == kNoLocation ? LocationLabel::undetected(Status::kNoCandidate) : LocationLabel::found(l);
  };
  for (Date d = first; d <= last; d += std::chrono::days{1}) {
    out.days.push_back({d, label(result.home),
                        windows.business_days.contains(d) ? label(result.work)
                                                          : LocationLabel::undetected(Status::kNonBusinessDay)});
  }
  return out;
}

}  // namespace howde
