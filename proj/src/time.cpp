#include "howde/time.hpp"

#include <charconv>
#include <cstdio>

namespace howde {
namespace {

template <typename Int>
bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, Int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return ec == std::errc{} && ptr == s.data() + pos + len;
}

std::optional<Date> make_date(int y, unsigned m, unsigned d) {
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

}  // namespace

IsoWeek iso_week(Date d) {
  // The ISO week belongs to the year containing its Thursday.
  const Date thursday = d + std::chrono::days{3 - weekday_index(d)};
  const std::chrono::year_month_day ymd{thursday};
  const int year = static_cast<int>(ymd.year());
  const Date jan1{std::chrono::year{year} / std::chrono::January / 1};
  const int week = static_cast<int>((thursday - jan1).count() / 7) + 1;
  return {year, week};
}

Date iso_week_monday(IsoWeek w) {
  // January 4th always falls in ISO week 1.
  const Date jan4{std::chrono::year{w.year} / std::chrono::January / 4};
  const Date week1_monday = jan4 - std::chrono::days{weekday_index(jan4)};
  return week1_monday + std::chrono::days{7 * (w.week - 1)};
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  if (!parse_fixed(s, 0, 4, y) || !parse_fixed(s, 5, 2, m) || !parse_fixed(s, 8, 2, d)) return std::nullopt;
  return make_date(y, m, d);
}

std::string format_iso_week(IsoWeek w) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-W%02d", w.year, w.week);
  return buf;
}

std::optional<IsoWeek> parse_iso_week(std::string_view s) {
  if (s.size() != 8 || s[4] != '-' || s[5] != 'W') return std::nullopt;
  IsoWeek w;
  if (!parse_fixed(s, 0, 4, w.year) || !parse_fixed(s, 6, 2, w.week)) return std::nullopt;
  if (w.week < 1 || w.week > 53) return std::nullopt;
  if (iso_week(iso_week_monday(w)) != w) return std::nullopt;
  return w;
}

std::string format_timestamp(Seconds t) {
  const Date d = date_of(t);
  const Seconds rem = t - start_of(d);
  char buf[48];
  const std::string day = format_date(d);
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d", day.c_str(), static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

std::optional<ParsedTimestamp> parse_timestamp(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.size() >= 19 && s[4] == '-' && (s[10] == 'T' || s[10] == ' ')) {
    auto date = parse_date(s.substr(0, 10));
    int hh = 0, mm = 0, ss = 0;
    if (!date || s[13] != ':' || s[16] != ':' || !parse_fixed(s, 11, 2, hh) || !parse_fixed(s, 14, 2, mm) ||
        !parse_fixed(s, 17, 2, ss)) {
      return std::nullopt;
    }
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    bool utc = false;
    if (s.size() == 20 && s[19] == 'Z') {
      utc = true;
    } else if (s.size() != 19) {
      return std::nullopt;
    }
    return ParsedTimestamp{start_of(*date) + hh * 3600 + mm * 60 + ss, utc};
  }
  Seconds v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return ParsedTimestamp{v, true};
}

}  // namespace howde
