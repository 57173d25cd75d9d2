#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "howde/baselines.hpp"
#include "howde/metrics.hpp"
#include "howde/model.hpp"
#include "howde/synth.hpp"

namespace howde {

enum class Detector { kHowde, kAtlas, kTimeGeo };

std::string_view to_string(Detector d);

// Everything a run can be configured with. Keys of the key=value format are
// the field names below; detector parameters use their conventional names
// (delta_T_H, C_hours, f_days_W, ...).
struct RunConfig {
  HowdeParams params;

  std::string input;   // stops CSV
  std::string output;  // result CSV ("-" for stdout)
  std::string truth;
  std::string coords;

  Detector detector = Detector::kHowde;
  BaselineWindows baseline_windows = BaselineWindows::kNative;
  std::optional<Granularity> protocol;  // inferred from the truth file when unset
  int bootstrap_B = 1000;
  std::uint64_t seed = 0;
  int prefilter_min_days = 0;

  PopulationSpec population;
};

// All recognised keys, in documentation order.
const std::vector<std::string>& config_keys();

// Throws ConfigError for an unknown key or an unparseable value.
void set_config_key(RunConfig& cfg, std::string_view key, std::string_view value);

// Flat "key = value" lines; blank lines and '#' comments are ignored.
void load_config(RunConfig& cfg, std::istream& in, std::string_view source = "config");
void load_config_file(RunConfig& cfg, const std::string& path);

// Checks detector parameters and the numeric run settings.
void validate(const RunConfig& cfg);

// Hour sets as comma-separated hours or inclusive ranges ("0-5,22,23").
HourSet parse_hour_set(std::string_view s);
// Weekdays as names or indices (Mon = 0), ranges allowed ("Mon-Fri").
WeekdaySet parse_weekday_set(std::string_view s);

}  // namespace howde
