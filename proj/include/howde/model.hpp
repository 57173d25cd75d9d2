#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "howde/time.hpp"

namespace howde {

// Malformed or inconsistent input data (bad rows, overlapping stops, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kHoursPerDay = 24;

// Index into a per-user location dictionary. Dictionaries are sorted, so index
// order equals lexicographic order of the location ids.
using LocIndex = std::uint32_t;
inline constexpr LocIndex kNoLocation = std::numeric_limits<LocIndex>::max();

enum class Scope : std::uint8_t { kHome, kWork };
enum class WindowMode : std::uint8_t { kCentered, kPastOnly, kFullPeriod };

enum class Status : std::uint8_t {
  kDetected,
  kDayCoverage,
  kWindowCoverage,
  kNoCandidate,
  kNonBusinessDay,
};

std::string_view to_string(Scope s);
std::string_view to_string(WindowMode m);
std::string_view to_string(Status s);
std::optional<Scope> parse_scope(std::string_view s);
std::optional<WindowMode> parse_window_mode(std::string_view s);
std::optional<Status> parse_status(std::string_view s);

struct StopRecord {
  std::string user_id;
  std::string loc_id;
  Seconds start = 0;
  Seconds end = 0;
  bool operator==(const StopRecord&) const = default;
};

struct Stop {
  LocIndex loc = kNoLocation;
  Seconds start = 0;
  Seconds end = 0;
  bool operator==(const Stop&) const = default;
};

// All stops of one user, with locations interned into a sorted dictionary.
struct UserTrace {
  std::string user_id;
  std::vector<std::string> locations;
  std::vector<Stop> stops;  // sorted by start, non-overlapping

  std::string_view location(LocIndex i) const { return locations[i]; }
  std::optional<LocIndex> find_location(std::string_view loc_id) const;
};

// Builds a trace from raw records of one user. Sorts by start and rejects
// non-positive durations and overlapping stops.
UserTrace make_trace(std::string user_id, std::span<const StopRecord> records);

// Throws InputError naming the user and the offending pair if stops overlap.
void check_no_overlap(const UserTrace& trace);

std::vector<StopRecord> to_records(const UserTrace& trace);

class HourSet {
 public:
  constexpr HourSet() = default;
  static constexpr HourSet range(int first, int last_exclusive) {
    HourSet s;
    for (int h = first; h < last_exclusive; ++h) s.mask_ |= 1u << h;
    return s;
  }
  static constexpr HourSet from_mask(std::uint32_t mask) {
    HourSet s;
    s.mask_ = mask & 0xFFFFFFu;
    return s;
  }
  constexpr bool contains(int hour) const { return (mask_ >> hour) & 1u; }
  constexpr void insert(int hour) { mask_ |= 1u << hour; }
  constexpr int size() const { return __builtin_popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint32_t mask() const { return mask_; }
  constexpr HourSet operator|(HourSet o) const { return from_mask(mask_ | o.mask_); }
  bool operator==(const HourSet&) const = default;

 private:
  std::uint32_t mask_ = 0;
};

class WeekdaySet {
 public:
  constexpr WeekdaySet() = default;
  static constexpr WeekdaySet range(int first, int last_exclusive) {
    WeekdaySet s;
    for (int d = first; d < last_exclusive; ++d) s.mask_ |= static_cast<std::uint8_t>(1u << d);
    return s;
  }
  constexpr bool contains(int weekday) const { return (mask_ >> weekday) & 1u; }
  bool contains(Date d) const { return contains(weekday_index(d)); }
  constexpr void insert(int weekday) { mask_ |= static_cast<std::uint8_t>(1u << weekday); }
  constexpr int size() const { return __builtin_popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  bool operator==(const WeekdaySet&) const = default;

 private:
  std::uint8_t mask_ = 0;
};

// Night hours [00:00, 06:00) on all days; business hours [09:00, 16:00) on Mon-Fri.
struct TimeWindows {
  HourSet night_bins = HourSet::range(0, 6);
  HourSet business_bins = HourSet::range(9, 16);
  WeekdaySet business_days = WeekdaySet::range(0, 5);

  HourSet bins(Scope scope) const { return scope == Scope::kHome ? night_bins : business_bins; }
  bool operator==(const TimeWindows&) const = default;
};

struct HowdeParams {
  int delta_T_H = 28;
  int delta_T_W = 42;
  double C_hours = 0.4;
  double C_days_H = 0.4;
  double C_days_W = 0.4;
  double f_hours_H = 0.7;
  double f_hours_W = 0.4;
  double f_days_W = 0.6;
  WindowMode window_mode = WindowMode::kCentered;
  TimeWindows windows;

  int delta_T(Scope s) const { return s == Scope::kHome ? delta_T_H : delta_T_W; }
  double C_days(Scope s) const { return s == Scope::kHome ? C_days_H : C_days_W; }
  double f_hours(Scope s) const { return s == Scope::kHome ? f_hours_H : f_hours_W; }

  // Throws ConfigError on out-of-range fractions, negative or (in CENTERED
  // mode) odd window sizes, and empty bin sets.
  void validate() const;
  bool operator==(const HowdeParams&) const = default;
};

// 24 hourly slots; each holds the location with the largest dwell inside that
// hour or kNoLocation when no stop intersects it.
struct HourlyDay {
  Date date;
  std::array<LocIndex, kHoursPerDay> slots;

  HourlyDay() { slots.fill(kNoLocation); }
  explicit HourlyDay(Date d) : date(d) { slots.fill(kNoLocation); }
  bool operator==(const HourlyDay&) const = default;
};

struct LocationLabel {
  LocIndex loc = kNoLocation;
  Status status = Status::kNoCandidate;

  bool detected() const { return status == Status::kDetected; }
  static LocationLabel found(LocIndex l) { return {l, Status::kDetected}; }
  static LocationLabel undetected(Status why) { return {kNoLocation, why}; }
  bool operator==(const LocationLabel&) const = default;
};

struct DayLabel {
  Date date;
  LocationLabel home;
  LocationLabel work;
  bool operator==(const DayLabel&) const = default;
};

// Per-day labels of one user. Location indices refer to `locations`.
struct UserLabels {
  std::string user_id;
  std::vector<std::string> locations;
  std::vector<DayLabel> days;  // ascending dates

  std::string_view location(LocIndex i) const { return locations[i]; }
  const LocationLabel& label(const DayLabel& d, Scope s) const { return s == Scope::kHome ? d.home : d.work; }
};

// Label equality after resolving location indices to ids.
bool same_labels(const UserLabels& a, const UserLabels& b);

}  // namespace howde
