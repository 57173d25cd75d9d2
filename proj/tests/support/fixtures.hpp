#pragma once

#include <string>
#include <vector>

#include "howde/model.hpp"

namespace howde::testing {

struct Row {
  std::string loc;
  std::string start;  // "YYYY-MM-DDTHH:MM:SS"
  std::string end;
};

inline Seconds ts(const std::string& s) { return parse_timestamp(s).value().value; }
inline Date day(const std::string& s) { return parse_date(s).value(); }

inline UserTrace trace_of(const std::string& user, const std::vector<Row>& rows) {
  std::vector<StopRecord> records;
  for (const Row& r : rows) records.push_back({user, r.loc, ts(r.start), ts(r.end)});
  return make_trace(user, records);
}

// One stop per listed hour of `date` at `loc`, covering [h, h+1).
inline void add_hours(std::vector<StopRecord>& out, const std::string& user, const std::string& loc, Date date,
                      std::initializer_list<int> hours) {
  for (int h : hours) out.push_back({user, loc, start_of(date) + h * 3600, start_of(date) + (h + 1) * 3600});
}

// Noiseless commuter: home 00-08 and 17-24, work 08-17 on Mon-Fri, home all
// day on weekends.
inline UserTrace commuter(const std::string& user, Date first, int n_days, const std::string& home = "H",
                          const std::string& work = "W") {
  std::vector<StopRecord> records;
  for (int i = 0; i < n_days; ++i) {
    const Date d = first + std::chrono::days{i};
    const Seconds s = start_of(d);
    if (weekday_index(d) < 5) {
      records.push_back({user, home, s, s + 8 * 3600});
      records.push_back({user, work, s + 8 * 3600, s + 17 * 3600});
      records.push_back({user, home, s + 17 * 3600, s + 24 * 3600});
    } else {
      records.push_back({user, home, s, s + 24 * 3600});
    }
  }
  return make_trace(user, records);
}

}  // namespace howde::testing
