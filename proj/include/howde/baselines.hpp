#pragma once

#include <span>
#include <vector>

#include "howde/apps.hpp"
#include "howde/model.hpp"

namespace howde {

// NATIVE uses each method's published time windows; HARMONIZED swaps in the
// shared night/business bins while keeping the weekday/weekend split.
enum class BaselineWindows { kNative, kHarmonized };

struct AtlasOptions {
  BaselineWindows windows = BaselineWindows::kNative;
  TimeWindows shared;
  int min_nights = 10;  // only sets BaselineResult::qualifies
};

struct TimeGeoOptions {
  BaselineWindows windows = BaselineWindows::kNative;
  TimeWindows shared;
  int min_total_stops = 50;
  int min_home_stays = 10;
  int min_work_visits = 3;
  double min_work_distance_km = 0.5;
};

struct BaselineResult {
  std::string user_id;
  LocIndex home = kNoLocation;
  LocIndex work = kNoLocation;
  bool qualifies = false;
  std::size_t skipped_candidates = 0;  // TimeGeo work candidates without coordinates
};

// Location with the largest cumulative night dwell; [22:00, 06:00) natively.
LocIndex atlas_home(const UserTrace& trace, const AtlasOptions& opts);
// Location with the largest weekday dwell in [09:00, 16:00).
LocIndex atlas_work(const UserTrace& trace, const AtlasOptions& opts);
BaselineResult run_atlas(const UserTrace& trace, const AtlasOptions& opts);

// Most visited location during weekday nights [19:00, 08:00) and weekends,
// subject to the minimum stop and home-stay counts.
LocIndex timegeo_home(const UserTrace& trace, const TimeGeoOptions& opts);

struct TimeGeoWork {
  LocIndex loc = kNoLocation;
  std::size_t skipped_candidates = 0;
};

// Most visited weekday [08:00, 19:00) location with enough visits and more
// than min_work_distance_km from home. Candidates lacking coordinates are
// skipped and counted.
TimeGeoWork timegeo_work(const UserTrace& trace, LocIndex home, const CoordinateTable& coords,
                         const TimeGeoOptions& opts);
BaselineResult run_timegeo(const UserTrace& trace, const CoordinateTable& coords, const TimeGeoOptions& opts);

// Spreads a static result over every date touched by the user's stops so it
// can be scored like per-day detector output.
UserLabels baseline_labels(const UserTrace& trace, const BaselineResult& result, const TimeWindows& windows);

}  // namespace howde
