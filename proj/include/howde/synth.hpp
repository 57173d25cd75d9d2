#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "howde/apps.hpp"
#include "howde/metrics.hpp"
#include "howde/model.hpp"

namespace howde {

// Day-level behaviour of a synthetic agent.
//  COMMUTER     nights at home, business hours at work on business days
//  HOME_DAY     the whole day at home
//  AWAY_DAY     the whole day (nights included) at the agent's away location
//  NIGHT_SHIFT  night hours at work, daytime at home
enum class DayProfile : std::uint8_t { kCommuter, kHomeDay, kAwayDay, kNightShift };

struct ProfileMix {
  double commuter = 1.0;
  double home_day = 0.0;
  double away_day = 0.0;
  double night_shift = 0.0;
};

struct ScheduleEntry {
  std::string loc_id;
  Date first;
  Date last;  // inclusive
};

struct AgentSpec {
  std::string user_id;
  Date first_day;
  int n_days = 0;
  std::vector<ScheduleEntry> homes;  // non-overlapping date ranges
  std::vector<ScheduleEntry> works;
  ProfileMix mix;
  double missing_rate = 0.0;  // per-hour drop probability, [0, 1)
  std::uint64_t seed = 0;
  std::string away_loc;
  std::optional<std::string> second_home;  // alternative night base
  double second_home_rate = 0.0;           // share of days based at second_home
  std::vector<std::string> leisure;
  std::optional<std::string> errand;  // brief visits around work on commuter days
  double leisure_rate = 0.0;
  std::vector<LocationCoords> places;

  // Throws ConfigError on overlapping schedules or an out-of-range missing rate.
  void validate() const;
};

struct SyntheticAgent {
  UserTrace trace;
  std::vector<TruthEntry> home_weeks;
  std::vector<TruthEntry> work_weeks;
  std::optional<TruthEntry> home_user;
  std::optional<TruthEntry> work_user;
};

// Deterministic for a given spec (including its seed).
SyntheticAgent generate(const AgentSpec& spec);

struct PopulationSpec {
  int users = 100;
  int days = 120;
  Date start = Date{std::chrono::year{2019} / std::chrono::January / 7};
  std::uint64_t seed = 1;
  double missing_rate_min = 0.0;
  double missing_rate_max = 0.0;
  ProfileMix mix;
  double leisure_rate = 0.3;
  double multi_home_share = 0.0;  // agents splitting nights with a second home
  double multi_home_away_min = 0.35;
  double multi_home_away_max = 0.6;
  double near_work_share = 0.0;   // agents working within 500 m of home
  double move_share = 0.0;        // agents moving home once, mid-period
  double job_change_share = 0.0;  // agents changing work once, mid-period
  double errand_share = 0.0;      // agents with a frequently visited errand spot
  double unemployed_share = 0.0;
  std::string id_prefix = "u";

  void validate() const;
};

std::vector<AgentSpec> make_population(const PopulationSpec& spec);

struct SyntheticPopulation {
  std::vector<UserTrace> traces;
  GroundTruth home_weeks{Scope::kHome, Granularity::kUserWeek, {}};
  GroundTruth work_weeks{Scope::kWork, Granularity::kUserWeek, {}};
  GroundTruth home_users{Scope::kHome, Granularity::kUser, {}};
  GroundTruth work_users{Scope::kWork, Granularity::kUser, {}};
  CoordinateTable coords;
};

SyntheticPopulation generate_population(const std::vector<AgentSpec>& agents, int threads);

}  // namespace howde
