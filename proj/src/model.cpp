#include "howde/model.hpp"

#include <algorithm>

namespace howde {
namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

std::string_view to_string(Scope s) { return s == Scope::kHome ? "HOME" : "WORK"; }

std::string_view to_string(WindowMode m) {
  switch (m) {
    case WindowMode::kCentered: return "CENTERED";
    case WindowMode::kPastOnly: return "PAST_ONLY";
    case WindowMode::kFullPeriod: return "FULL_PERIOD";
  }
  return "?";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kDetected: return "DETECTED";
    case Status::kDayCoverage: return "DAY_COVERAGE";
    case Status::kWindowCoverage: return "WINDOW_COVERAGE";
    case Status::kNoCandidate: return "NO_CANDIDATE";
    case Status::kNonBusinessDay: return "NON_BUSINESS_DAY";
  }
  return "?";
}

std::optional<Scope> parse_scope(std::string_view s) {
  if (s == "HOME" || s == "home") return Scope::kHome;
  if (s == "WORK" || s == "work") return Scope::kWork;
  return std::nullopt;
}

std::optional<WindowMode> parse_window_mode(std::string_view s) {
  if (s == "CENTERED" || s == "centered") return WindowMode::kCentered;
  if (s == "PAST_ONLY" || s == "past_only" || s == "past-only") return WindowMode::kPastOnly;
  if (s == "FULL_PERIOD" || s == "full_period" || s == "full-period") return WindowMode::kFullPeriod;
  return std::nullopt;
}

std::optional<Status> parse_status(std::string_view s) {
  for (Status st : {Status::kDetected, Status::kDayCoverage, Status::kWindowCoverage, Status::kNoCandidate,
                    Status::kNonBusinessDay}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<LocIndex> UserTrace::find_location(std::string_view loc_id) const {
  auto it = std::lower_bound(locations.begin(), locations.end(), loc_id);
  if (it == locations.end() || *it != loc_id) return std::nullopt;
  return static_cast<LocIndex>(it - locations.begin());
}

UserTrace make_trace(std::string user_id, std::span<const StopRecord> records) {
  UserTrace trace;
  trace.user_id = std::move(user_id);
  trace.locations.reserve(records.size());
  for (const auto& r : records) trace.locations.push_back(r.loc_id);
  std::sort(trace.locations.begin(), trace.locations.end());
  trace.locations.erase(std::unique(trace.locations.begin(), trace.locations.end()), trace.locations.end());

  trace.stops.reserve(records.size());
  for (const auto& r : records) {
    if (r.end <= r.start) {
      throw InputError("user " + trace.user_id + ": stop at " + r.loc_id + " starting " +
                       format_timestamp(r.start) + " has end <= start");
    }
    trace.stops.push_back({*trace.find_location(r.loc_id), r.start, r.end});
  }
  std::sort(trace.stops.begin(), trace.stops.end(), [](const Stop& a, const Stop& b) {
    return std::tie(a.start, a.end, a.loc) < std::tie(b.start, b.end, b.loc);
  });
  check_no_overlap(trace);
  return trace;
}

void check_no_overlap(const UserTrace& trace) {
  for (std::size_t i = 1; i < trace.stops.size(); ++i) {
    const Stop& a = trace.stops[i - 1];
    const Stop& b = trace.stops[i];
    if (b.start < a.end) {
      throw InputError("user " + trace.user_id + ": overlapping stops " + std::string(trace.location(a.loc)) + " [" +
                       format_timestamp(a.start) + ", " + format_timestamp(a.end) + ") and " +
                       std::string(trace.location(b.loc)) + " [" + format_timestamp(b.start) + ", " +
                       format_timestamp(b.end) + ")");
    }
  }
}

std::vector<StopRecord> to_records(const UserTrace& trace) {
  std::vector<StopRecord> out;
  out.reserve(trace.stops.size());
  for (const Stop& s : trace.stops) {
    out.push_back({trace.user_id, std::string(trace.location(s.loc)), s.start, s.end});
  }
  return out;
}

void HowdeParams::validate() const {
  auto fraction = [](const char* name, double v) {
    if (!in_unit(v)) throw ConfigError(std::string(name) + " must be in [0,1], got " + std::to_string(v));
  };
  fraction("C_hours", C_hours);
  fraction("C_days_H", C_days_H);
  fraction("C_days_W", C_days_W);
  fraction("f_hours_H", f_hours_H);
  fraction("f_hours_W", f_hours_W);
  fraction("f_days_W", f_days_W);
  for (auto [name, dt] : {std::pair{"delta_T_H", delta_T_H}, std::pair{"delta_T_W", delta_T_W}}) {
    if (dt < 0) throw ConfigError(std::string(name) + " must be >= 0");
    if (window_mode == WindowMode::kCentered && dt % 2 != 0) {
      throw ConfigError(std::string(name) + " must be even in CENTERED mode, got " + std::to_string(dt));
    }
  }
  if (windows.night_bins.empty()) throw ConfigError("night_bins must not be empty");
  if (windows.business_bins.empty()) throw ConfigError("business_bins must not be empty");
  if (windows.business_days.empty()) throw ConfigError("business_days must not be empty");
}

bool same_labels(const UserLabels& a, const UserLabels& b) {
  if (a.user_id != b.user_id || a.days.size() != b.days.size()) return false;
  auto same = [&](const LocationLabel& x, const LocationLabel& y) {
    if (x.status != y.status) return false;
    if (!x.detected()) return true;
    return a.location(x.loc) == b.location(y.loc);
  };
  for (std::size_t i = 0; i < a.days.size(); ++i) {
    const DayLabel& x = a.days[i];
    const DayLabel& y = b.days[i];
    if (x.date != y.date || !same(x.home, y.home) || !same(x.work, y.work)) return false;
  }
  return true;
}

}  // namespace howde
