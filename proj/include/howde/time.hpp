#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace howde {

// Wall-clock seconds since 1970-01-01T00:00:00 in the user's local time.
using Seconds = std::int64_t;
using Date = std::chrono::sys_days;

inline constexpr Seconds kSecondsPerHour = 3600;
inline constexpr Seconds kSecondsPerDay = 86400;

// Floor division that is correct for timestamps before 1970.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Date date_of(Seconds t) { return Date{std::chrono::days{floor_div(t, kSecondsPerDay)}}; }
inline Seconds start_of(Date d) { return static_cast<Seconds>(d.time_since_epoch().count()) * kSecondsPerDay; }
inline std::int64_t day_number(Date d) { return d.time_since_epoch().count(); }

// Monday = 0 ... Sunday = 6.
inline int weekday_index(Date d) {
  return static_cast<int>(std::chrono::weekday{d}.iso_encoding()) - 1;
}

struct IsoWeek {
  int year = 0;
  int week = 0;
  auto operator<=>(const IsoWeek&) const = default;
};

IsoWeek iso_week(Date d);
Date iso_week_monday(IsoWeek w);

std::string format_date(Date d);
std::optional<Date> parse_date(std::string_view s);

std::string format_iso_week(IsoWeek w);  // "2019-W05"
std::optional<IsoWeek> parse_iso_week(std::string_view s);

std::string format_timestamp(Seconds t);  // "2019-01-01T01:00:00"

struct ParsedTimestamp {
  Seconds value = 0;
  // True for epoch seconds and ISO strings carrying a 'Z' suffix; such values
  // still need the user's UTC offset applied to become local time.
  bool is_utc = false;
};

// Accepts integer epoch seconds or "YYYY-MM-DDTHH:MM:SS" (space separator and
// a trailing 'Z' are tolerated).
std::optional<ParsedTimestamp> parse_timestamp(std::string_view s);

}  // namespace howde
