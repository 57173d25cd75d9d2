#include "howde/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

namespace howde {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                    std::string(expected) + ")");
}

template <typename T>
T parse_int(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v, "a number");
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) return out;
    start = p + 1;
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Parses "a", "a-b" items into [first, last] index pairs via `item`.
template <typename Fn>
void parse_ranges(std::string_view s, std::string_view key, std::string_view expected, Fn&& item, int limit,
                  const std::function<void(int)>& insert) {
  if (trim(s).empty()) bad_value(key, s, expected);
  for (std::string_view part : split(s, ',')) {
    const std::size_t dash = part.find('-');
    const int a = item(trim(part.substr(0, dash)));
    const int b = dash == std::string_view::npos ? a : item(trim(part.substr(dash + 1)));
    if (a < 0 || b < 0 || a >= limit || b >= limit || b < a) bad_value(key, s, expected);
    for (int i = a; i <= b; ++i) insert(i);
  }
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

template <typename T>
Setter int_field(T RunConfig::*field) {
  return [field](RunConfig& c, std::string_view k, std::string_view v) { c.*field = parse_int<T>(k, v); };
}
Setter param_int(int HowdeParams::*field) {
  return [field](RunConfig& c, std::string_view k, std::string_view v) { c.params.*field = parse_int<int>(k, v); };
}
Setter param_real(double HowdeParams::*field) {
  return [field](RunConfig& c, std::string_view k, std::string_view v) { c.params.*field = parse_real(k, v); };
}
Setter string_field(std::string RunConfig::*field) {
  return [field](RunConfig& c, std::string_view, std::string_view v) { c.*field = std::string(v); };
}
template <typename T>
Setter pop_int(T PopulationSpec::*field) {
  return [field](RunConfig& c, std::string_view k, std::string_view v) { c.population.*field = parse_int<T>(k, v); };
}
Setter pop_real(double PopulationSpec::*field) {
  return [field](RunConfig& c, std::string_view k, std::string_view v) { c.population.*field = parse_real(k, v); };
}
Setter mix_real(double ProfileMix::*field) {
  return [field](RunConfig& c, std::string_view k, std::string_view v) {
    c.population.mix.*field = parse_real(k, v);
  };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"delta_T_H", param_int(&HowdeParams::delta_T_H)},
      {"delta_T_W", param_int(&HowdeParams::delta_T_W)},
      {"C_hours", param_real(&HowdeParams::C_hours)},
      {"C_days_H", param_real(&HowdeParams::C_days_H)},
      {"C_days_W", param_real(&HowdeParams::C_days_W)},
      {"f_hours_H", param_real(&HowdeParams::f_hours_H)},
      {"f_hours_W", param_real(&HowdeParams::f_hours_W)},
      {"f_days_W", param_real(&HowdeParams::f_days_W)},
      {"window_mode",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         auto m = parse_window_mode(v);
         if (!m) bad_value(k, v, "CENTERED, PAST_ONLY or FULL_PERIOD");
         c.params.window_mode = *m;
       }},
      {"night_bins",
       [](RunConfig& c, std::string_view, std::string_view v) { c.params.windows.night_bins = parse_hour_set(v); }},
      {"business_bins",
       [](RunConfig& c, std::string_view, std::string_view v) { c.params.windows.business_bins = parse_hour_set(v); }},
      {"business_days",
       [](RunConfig& c, std::string_view, std::string_view v) {
         c.params.windows.business_days = parse_weekday_set(v);
       }},
      {"input", string_field(&RunConfig::input)},
      {"output", string_field(&RunConfig::output)},
      {"truth", string_field(&RunConfig::truth)},
      {"coords", string_field(&RunConfig::coords)},
      {"detector",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const std::string s = lower(v);
         if (s == "howde") c.detector = Detector::kHowde;
         else if (s == "atlas") c.detector = Detector::kAtlas;
         else if (s == "timegeo") c.detector = Detector::kTimeGeo;
         else bad_value(k, v, "howde, atlas or timegeo");
       }},
      {"baseline_windows",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const std::string s = lower(v);
         if (s == "native") c.baseline_windows = BaselineWindows::kNative;
         else if (s == "harmonized") c.baseline_windows = BaselineWindows::kHarmonized;
         else bad_value(k, v, "native or harmonized");
       }},
      {"protocol",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const std::string s = lower(v);
         if (s == "user_week") c.protocol = Granularity::kUserWeek;
         else if (s == "user") c.protocol = Granularity::kUser;
         else bad_value(k, v, "user_week or user");
       }},
      {"bootstrap_B", int_field(&RunConfig::bootstrap_B)},
      {"seed", int_field(&RunConfig::seed)},
      {"prefilter_min_days", int_field(&RunConfig::prefilter_min_days)},
      {"users", pop_int(&PopulationSpec::users)},
      {"days", pop_int(&PopulationSpec::days)},
      {"start",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         auto d = parse_date(v);
         if (!d) bad_value(k, v, "a YYYY-MM-DD date");
         c.population.start = *d;
       }},
      {"missing_rate_min", pop_real(&PopulationSpec::missing_rate_min)},
      {"missing_rate_max", pop_real(&PopulationSpec::missing_rate_max)},
      {"mix_commuter", mix_real(&ProfileMix::commuter)},
      {"mix_home_day", mix_real(&ProfileMix::home_day)},
      {"mix_away_day", mix_real(&ProfileMix::away_day)},
      {"mix_night_shift", mix_real(&ProfileMix::night_shift)},
      {"leisure_rate", pop_real(&PopulationSpec::leisure_rate)},
      {"multi_home_share", pop_real(&PopulationSpec::multi_home_share)},
      {"multi_home_away_min", pop_real(&PopulationSpec::multi_home_away_min)},
      {"multi_home_away_max", pop_real(&PopulationSpec::multi_home_away_max)},
      {"near_work_share", pop_real(&PopulationSpec::near_work_share)},
      {"move_share", pop_real(&PopulationSpec::move_share)},
      {"job_change_share", pop_real(&PopulationSpec::job_change_share)},
      {"errand_share", pop_real(&PopulationSpec::errand_share)},
      {"unemployed_share", pop_real(&PopulationSpec::unemployed_share)},
      {"id_prefix",
       [](RunConfig& c, std::string_view, std::string_view v) { c.population.id_prefix = std::string(v); }},
  };
  return table;
}

int parse_weekday(std::string_view s) {
  static constexpr std::string_view names[] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
  const std::string l = lower(s);
  for (int i = 0; i < 7; ++i) {
    if (l == names[i]) return i;
  }
  int v = -1;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return -1;
  return v;
}

int parse_hour(std::string_view s) {
  int v = -1;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return -1;
  return v;
}

}  // namespace

std::string_view to_string(Detector d) {
  switch (d) {
    case Detector::kHowde: return "howde";
    case Detector::kAtlas: return "atlas";
    case Detector::kTimeGeo: return "timegeo";
  }
  return "?";
}

HourSet parse_hour_set(std::string_view s) {
  HourSet out;
  parse_ranges(s, "hour set", "hours 0-23 such as 0-5,22", parse_hour, kHoursPerDay,
               [&](int h) { out.insert(h); });
  return out;
}

WeekdaySet parse_weekday_set(std::string_view s) {
  WeekdaySet out;
  parse_ranges(s, "weekday set", "weekdays such as Mon-Fri", parse_weekday, 7, [&](int d) { out.insert(d); });
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, fn] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_key(RunConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& [name, fn] : setters()) {
    if (name == key) {
      fn(cfg, key, trim(value));
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void load_config(RunConfig& cfg, std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view l = line;
    if (const std::size_t hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const std::size_t eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_key(cfg, trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  load_config(cfg, in, path);
}

void validate(const RunConfig& cfg) {
  cfg.params.validate();
  if (cfg.bootstrap_B < 0) throw ConfigError("bootstrap_B must be >= 0");
  if (cfg.prefilter_min_days < 0) throw ConfigError("prefilter_min_days must be >= 0");
}

}  // namespace howde
