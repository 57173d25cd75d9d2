#include "howde/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace howde {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw InputError("error writing " + path);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  // std::from_chars for double is available in libstdc++ 11.
  return parse_number(s, out) && std::isfinite(out);
}

std::string line_error(std::size_t line, std::string_view what) {
  return "line " + std::to_string(line) + ": " + std::string(what);
}

// Reads the header line and checks its leading columns.
void expect_header(std::istream& in, std::initializer_list<std::string_view> columns, std::string_view what) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(std::string(what) + ": empty input");
  const auto fields = split_csv_line(line);
  std::size_t i = 0;
  for (std::string_view c : columns) {
    if (i >= fields.size() || trim(fields[i]) != c) {
      std::string expected;
      for (std::string_view x : columns) expected += (expected.empty() ? "" : ",") + std::string(x);
      throw InputError(std::string(what) + ": expected header starting with " + expected);
    }
    ++i;
  }
}

struct TraceBuilder {
  std::string user_id;
  std::unordered_map<std::string, LocIndex> loc_index;
  std::vector<std::string> locs;
  std::vector<Stop> stops;

  LocIndex intern(std::string_view loc) {
    auto [it, inserted] = loc_index.try_emplace(std::string(loc), static_cast<LocIndex>(locs.size()));
    if (inserted) locs.emplace_back(loc);
    return it->second;
  }

  UserTrace finish() {
    UserTrace t;
    t.user_id = std::move(user_id);
    std::vector<LocIndex> order(locs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<LocIndex>(i);
    std::sort(order.begin(), order.end(), [&](LocIndex a, LocIndex b) { return locs[a] < locs[b]; });
    std::vector<LocIndex> remap(locs.size());
    t.locations.reserve(locs.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      remap[order[rank]] = static_cast<LocIndex>(rank);
      t.locations.push_back(std::move(locs[order[rank]]));
    }
    for (Stop& s : stops) s.loc = remap[s.loc];
    std::sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) {
      return std::tie(a.start, a.end, a.loc) < std::tie(b.start, b.end, b.loc);
    });
    t.stops = std::move(stops);
    check_no_overlap(t);
    return t;
  }
};

}  // namespace

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string format_fixed(double x, int digits) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s = buf;
  if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

// ---- stops -------------------------------------------------------------------

StopTable read_stops(std::istream& in, const ReadOptions& opts) {
  StopTable table;
  expect_header(in, {"user_id", "loc_id", "start", "end"}, "stops");
  std::unordered_map<std::string, std::size_t> user_index;
  std::vector<TraceBuilder> builders;
  TraceBuilder* last = nullptr;

  std::string line;
  std::size_t line_no = 1;
  auto reject = [&](std::string_view why) {
    if (!opts.skip_bad_rows) throw InputError(line_error(line_no, why));
    table.rejected.push_back({line_no, std::string(why)});
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++table.rows;
    const auto f = split_csv_line(line);
    if (f.size() != 4 && f.size() != 5) {
      reject("expected 4 or 5 fields, got " + std::to_string(f.size()));
      continue;
    }
    if (f[0].empty() || f[1].empty()) {
      reject("empty user_id or loc_id");
      continue;
    }
    auto start = parse_timestamp(f[2]);
    auto end = parse_timestamp(f[3]);
    if (!start || !end) {
      reject("unparseable timestamp '" + std::string(!start ? f[2] : f[3]) + "'");
      continue;
    }
    std::int64_t offset_minutes = 0;
    if (f.size() == 5 && !f[4].empty() && !parse_number(f[4], offset_minutes)) {
      reject("unparseable utc_offset_minutes '" + std::string(f[4]) + "'");
      continue;
    }
    Seconds s = start->value + (start->is_utc ? offset_minutes * 60 : 0);
    Seconds e = end->value + (end->is_utc ? offset_minutes * 60 : 0);
    if (e <= s) {
      reject("end <= start");
      continue;
    }
    if (last == nullptr || last->user_id != f[0]) {
      auto [it, inserted] = user_index.try_emplace(std::string(f[0]), builders.size());
      if (inserted) {
        builders.emplace_back();
        builders.back().user_id = std::string(f[0]);
      }
      last = &builders[it->second];
    }
    last->stops.push_back({last->intern(f[1]), s, e});
  }

  std::sort(builders.begin(), builders.end(),
            [](const TraceBuilder& a, const TraceBuilder& b) { return a.user_id < b.user_id; });
  table.traces.reserve(builders.size());
  for (auto& b : builders) table.traces.push_back(b.finish());
  return table;
}

StopTable read_stops_file(const std::string& path, const ReadOptions& opts) {
  auto in = open_in(path);
  return read_stops(in, opts);
}

void write_stops(std::ostream& out, std::span<const UserTrace> traces, TimeFormat format) {
  out << "user_id,loc_id,start,end\n";
  std::string row;
  for (const UserTrace& t : traces) {
    for (const Stop& s : t.stops) {
      row.clear();
      row += t.user_id;
      row += ',';
      row += t.location(s.loc);
      row += ',';
      row += format == TimeFormat::kIso ? format_timestamp(s.start) : std::to_string(s.start);
      row += ',';
      row += format == TimeFormat::kIso ? format_timestamp(s.end) : std::to_string(s.end);
      row += '\n';
      out << row;
    }
  }
}

void write_stops_file(const std::string& path, std::span<const UserTrace> traces, TimeFormat format) {
  auto out = open_out(path);
  write_stops(out, traces, format);
  finish(out, path);
}

// ---- labels ------------------------------------------------------------------

void write_labels(std::ostream& out, std::span<const UserLabels> labels) {
  out << "user_id,date,home_loc,home_status,work_loc,work_status\n";
  std::string row;
  for (const UserLabels& u : labels) {
    for (const DayLabel& d : u.days) {
      row.clear();
      row += u.user_id;
      row += ',';
      row += format_date(d.date);
      for (const LocationLabel* l : {&d.home, &d.work}) {
        row += ',';
        if (l->detected()) row += u.location(l->loc);
        row += ',';
        row += to_string(l->status);
      }
      row += '\n';
      out << row;
    }
  }
}

void write_labels_file(const std::string& path, std::span<const UserLabels> labels) {
  auto out = open_out(path);
  write_labels(out, labels);
  finish(out, path);
}

std::vector<UserLabels> read_labels(std::istream& in) {
  expect_header(in, {"user_id", "date", "home_loc", "home_status", "work_loc", "work_status"}, "labels");
  struct Raw {
    Date date;
    std::string home, work;
    Status home_status, work_status;
  };
  std::map<std::string, std::vector<Raw>> by_user;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw InputError(line_error(line_no, "expected 6 fields"));
    auto date = parse_date(f[1]);
    auto hs = parse_status(f[3]);
    auto ws = parse_status(f[5]);
    if (!date || !hs || !ws) throw InputError(line_error(line_no, "bad date or status"));
    if ((*hs == Status::kDetected) == f[2].empty() || (*ws == Status::kDetected) == f[4].empty()) {
      throw InputError(line_error(line_no, "location must be present exactly when DETECTED"));
    }
    by_user[std::string(f[0])].push_back({*date, std::string(f[2]), std::string(f[4]), *hs, *ws});
  }
  std::vector<UserLabels> out;
  for (auto& [user, rows] : by_user) {
    UserLabels u;
    u.user_id = user;
    for (const Raw& r : rows) {
      if (!r.home.empty()) u.locations.push_back(r.home);
      if (!r.work.empty()) u.locations.push_back(r.work);
    }
    std::sort(u.locations.begin(), u.locations.end());
    u.locations.erase(std::unique(u.locations.begin(), u.locations.end()), u.locations.end());
    auto index = [&](const std::string& loc, Status st) {
      if (st != Status::kDetected) return LocationLabel::undetected(st);
      auto it = std::lower_bound(u.locations.begin(), u.locations.end(), loc);
      return LocationLabel::found(static_cast<LocIndex>(it - u.locations.begin()));
    };
    std::stable_sort(rows.begin(), rows.end(), [](const Raw& a, const Raw& b) { return a.date < b.date; });
    for (const Raw& r : rows) u.days.push_back({r.date, index(r.home, r.home_status), index(r.work, r.work_status)});
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<UserLabels> read_labels_file(const std::string& path) {
  auto in = open_in(path);
  return read_labels(in);
}

// ---- ground truth ------------------------------------------------------------

GroundTruth read_truth(std::istream& in, Scope scope) {
  expect_header(in, {"user_id", "scope", "week", "loc_id"}, "truth");
  std::map<std::pair<std::string, std::optional<IsoWeek>>, std::vector<std::string>> keys;
  std::optional<Granularity> granularity;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) throw InputError(line_error(line_no, "expected 4 fields"));
    auto row_scope = parse_scope(f[1]);
    if (!row_scope) throw InputError(line_error(line_no, "scope must be HOME or WORK"));
    if (*row_scope != scope) continue;
    std::optional<IsoWeek> week;
    if (!f[2].empty()) {
      week = parse_iso_week(f[2]);
      if (!week) throw InputError(line_error(line_no, "bad ISO week '" + std::string(f[2]) + "'"));
    }
    const Granularity g = week ? Granularity::kUserWeek : Granularity::kUser;
    if (granularity && *granularity != g) throw InputError(line_error(line_no, "mixed USER and USER_WEEK truth rows"));
    granularity = g;
    if (f[0].empty() || f[3].empty()) throw InputError(line_error(line_no, "empty user_id or loc_id"));
    keys[{std::string(f[0]), week}].emplace_back(f[3]);
  }
  GroundTruth t;
  t.scope = scope;
  t.granularity = granularity.value_or(Granularity::kUserWeek);
  for (auto& [key, locs] : keys) {
    std::sort(locs.begin(), locs.end());
    locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
    t.entries.push_back({key.first, key.second, std::move(locs)});
  }
  return t;
}

GroundTruth read_truth_file(const std::string& path, Scope scope) {
  auto in = open_in(path);
  return read_truth(in, scope);
}

void write_truth(std::ostream& out, std::span<const GroundTruth> truths) {
  out << "user_id,scope,week,loc_id\n";
  for (const GroundTruth& t : truths) {
    for (const TruthEntry& e : t.entries) {
      const std::string week = e.week ? format_iso_week(*e.week) : "";
      for (const std::string& loc : e.locations) {
        out << e.user_id << ',' << to_string(t.scope) << ',' << week << ',' << loc << '\n';
      }
    }
  }
}

void write_truth_file(const std::string& path, std::span<const GroundTruth> truths) {
  auto out = open_out(path);
  write_truth(out, truths);
  finish(out, path);
}

// ---- coordinates -------------------------------------------------------------

CoordinateTable read_coords(std::istream& in) {
  expect_header(in, {"loc_id", "lat", "lon"}, "coords");
  CoordinateTable table;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3 && f.size() != 4) throw InputError(line_error(line_no, "expected 3 or 4 fields"));
    LocationCoords c;
    c.loc_id = std::string(f[0]);
    if (c.loc_id.empty() || !parse_double(f[1], c.lat) || !parse_double(f[2], c.lon)) {
      throw InputError(line_error(line_no, "bad loc_id or coordinates"));
    }
    if (c.lat < -90 || c.lat > 90 || c.lon < -180 || c.lon > 180) {
      throw InputError(line_error(line_no, "coordinates out of range"));
    }
    if (f.size() == 4 && !f[3].empty()) c.region_id = std::string(f[3]);
    table[c.loc_id] = std::move(c);
  }
  return table;
}

CoordinateTable read_coords_file(const std::string& path) {
  auto in = open_in(path);
  return read_coords(in);
}

void write_coords(std::ostream& out, const CoordinateTable& coords) {
  std::vector<const LocationCoords*> rows;
  bool regions = false;
  for (const auto& [id, c] : coords) {
    rows.push_back(&c);
    regions = regions || c.region_id.has_value();
  }
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->loc_id < b->loc_id; });
  out << (regions ? "loc_id,lat,lon,region_id\n" : "loc_id,lat,lon\n");
  for (const auto* c : rows) {
    out << c->loc_id << ',' << format_fixed(c->lat, 7) << ',' << format_fixed(c->lon, 7);
    if (regions) out << ',' << c->region_id.value_or("");
    out << '\n';
  }
}

void write_coords_file(const std::string& path, const CoordinateTable& coords) {
  auto out = open_out(path);
  write_coords(out, coords);
  finish(out, path);
}

std::map<std::string, std::string> read_mapping_file(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty input");
  std::map<std::string, std::string> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      throw InputError(path + ": " + line_error(line_no, "expected 2 non-empty fields"));
    }
    out[std::string(f[0])] = std::string(f[1]);
  }
  return out;
}

std::map<std::string, double> read_reference_file(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty input");
  std::map<std::string, double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    double v = 0;
    if (f.size() != 2 || f[0].empty() || !parse_double(f[1], v)) {
      throw InputError(path + ": " + line_error(line_no, "expected region_id,value"));
    }
    out[std::string(f[0])] = v;
  }
  return out;
}

}  // namespace howde
