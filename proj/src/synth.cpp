#include "howde/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "howde/parallel.hpp"

namespace howde {
namespace {

constexpr int kMinutesPerDay = 1440;

struct Segment {
  int from = 0;  // minutes since midnight
  int to = 0;
  int loc = -1;
};

class DayPlanner {
 public:
  DayPlanner(const AgentSpec& spec, std::mt19937_64& rng) : spec_(spec), rng_(rng) {}

  int minute(int lo, int hi, int step = 5) {
    std::uniform_int_distribution<int> d(0, (hi - lo) / step);
    return lo + d(rng_) * step;
  }
  bool chance(double p) { return p > 0.0 && std::bernoulli_distribution(std::min(p, 1.0))(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
    return v[d(rng_)];
  }

  DayProfile sample_profile() {
    const ProfileMix& m = spec_.mix;
    std::discrete_distribution<int> d({m.commuter, m.home_day, m.away_day, m.night_shift});
    return static_cast<DayProfile>(d(rng_));
  }

  // Loc indices: 0..n into the agent's name table, resolved by the caller.
  std::vector<Segment> plan(DayProfile profile, bool business_day, int home, int work, int away,
                            const std::vector<int>& leisure, int errand) {
    std::vector<Segment> day;
    const bool works_today = business_day && work >= 0;
    if (profile == DayProfile::kAwayDay && away >= 0) {
      day.push_back({0, kMinutesPerDay, away});
      return day;
    }
    if (profile == DayProfile::kNightShift && works_today) {
      const int off = minute(360, 390);
      day.push_back({0, off, work});
      day.push_back({off + minute(20, 40), kMinutesPerDay, home});
      return day;
    }
    if (profile == DayProfile::kCommuter && works_today) {
      const int leave = minute(420, 470);
      int t = leave;
      day.push_back({0, leave, home});
      if (errand >= 0) {
        day.push_back({t + 5, t + 15, errand});
        t += 15;
      }
      const int arrive = std::min(t + minute(10, 30), 535);
      const int depart = minute(965, 1075);
      if (errand >= 0) {
        day.push_back({arrive, 720, work});
        day.push_back({720, 745, errand});
        day.push_back({745, depart, work});
        day.push_back({depart + 5, depart + 15, errand});
        t = depart + 15;
      } else {
        day.push_back({arrive, depart, work});
        t = depart;
      }
      t += minute(15, 40);
      if (!leisure.empty() && chance(spec_.leisure_rate)) {
        const int from = std::max(t, minute(1110, 1170));
        const int to = from + minute(60, 120);
        day.push_back({from, to, pick(leisure)});
        t = to + minute(15, 30);
      }
      day.push_back({t, kMinutesPerDay, home});
      return day;
    }
    // Home day (also off days of commuters and night-shift workers).
    if (!leisure.empty() && chance(spec_.leisure_rate)) {
      const int from = minute(660, 840);
      const int to = from + minute(60, 240);
      day.push_back({0, from - minute(15, 30), home});
      day.push_back({from, to, pick(leisure)});
      day.push_back({to + minute(15, 30), kMinutesPerDay, home});
    } else {
      day.push_back({0, kMinutesPerDay, home});
    }
    return day;
  }

 private:
  const AgentSpec& spec_;
  std::mt19937_64& rng_;
};

const ScheduleEntry* active(const std::vector<ScheduleEntry>& schedule, Date d) {
  for (const auto& e : schedule) {
    if (e.first <= d && d <= e.last) return &e;
  }
  return nullptr;
}

void check_schedule(const std::vector<ScheduleEntry>& s, const std::string& what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].last < s[i].first) throw ConfigError(what + " entry " + s[i].loc_id + " ends before it starts");
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s[i].first <= s[j].last && s[j].first <= s[i].last) {
        throw ConfigError(what + " entries " + s[i].loc_id + " and " + s[j].loc_id + " overlap");
      }
    }
  }
}

TruthEntry make_entry(const std::string& user, std::optional<IsoWeek> week, std::vector<std::string> locs) {
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  return {user, week, std::move(locs)};
}

LocationCoords offset(const LocationCoords& from, std::string id, double km, double bearing) {
  const double dlat = km * std::cos(bearing) / 111.32;
  const double dlon = km * std::sin(bearing) / (111.32 * std::cos(from.lat * std::numbers::pi / 180.0));
  return {std::move(id), from.lat + dlat, from.lon + dlon, std::nullopt};
}

}  // namespace

void AgentSpec::validate() const {
  if (missing_rate < 0.0 || missing_rate >= 1.0) throw ConfigError("missing_rate must be in [0,1)");
  if (second_home_rate < 0.0 || second_home_rate > 1.0) throw ConfigError("second_home_rate must be in [0,1]");
  if (n_days < 0) throw ConfigError("n_days must be >= 0");
  check_schedule(homes, "home schedule");
  check_schedule(works, "work schedule");
}

SyntheticAgent generate(const AgentSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  DayPlanner planner(spec, rng);

  std::vector<std::string> names;
  std::map<std::string, int> index;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = index.emplace(s, static_cast<int>(names.size()));
    if (inserted) names.push_back(s);
    return it->second;
  };
  const int away = spec.away_loc.empty() ? -1 : intern(spec.away_loc);
  std::vector<int> leisure;
  for (const auto& l : spec.leisure) leisure.push_back(intern(l));
  const int errand = spec.errand ? intern(*spec.errand) : -1;
  const int second = spec.second_home ? intern(*spec.second_home) : -1;

  const TimeWindows windows;
  std::vector<std::pair<int, Stop>> raw;  // name index, absolute seconds
  const Seconds origin = start_of(spec.first_day);
  for (int i = 0; i < spec.n_days; ++i) {
    const Date d = spec.first_day + std::chrono::days{i};
    const DayProfile profile = planner.sample_profile();
    const bool at_second = second >= 0 && planner.chance(spec.second_home_rate);
    const ScheduleEntry* h = active(spec.homes, d);
    const ScheduleEntry* w = active(spec.works, d);
    std::vector<Segment> plan;
    if (h != nullptr) {
      plan = planner.plan(profile, windows.business_days.contains(d), at_second ? second : intern(h->loc_id),
                          w ? intern(w->loc_id) : -1, away, leisure, errand);
    }
    // Drop whole hourly contributions with the missing rate.
    std::array<bool, kHoursPerDay> kept{};
    for (auto& k : kept) k = !planner.chance(spec.missing_rate);
    for (const Segment& s : plan) {
      for (int hour = s.from / 60; hour * 60 < s.to; ++hour) {
        if (!kept[static_cast<std::size_t>(hour)]) continue;
        const int from = std::max(s.from, hour * 60);
        const int to = std::min(s.to, hour * 60 + 60);
        if (to <= from) continue;
        const Seconds a = origin + (static_cast<Seconds>(i) * kMinutesPerDay + from) * 60;
        const Seconds b = origin + (static_cast<Seconds>(i) * kMinutesPerDay + to) * 60;
        if (!raw.empty() && raw.back().first == s.loc && raw.back().second.end == a) {
          raw.back().second.end = b;
        } else {
          raw.push_back({s.loc, Stop{0, a, b}});
        }
      }
    }
  }

  SyntheticAgent out;
  out.trace.user_id = spec.user_id;
  std::vector<std::uint8_t> used(names.size(), 0);
  for (const auto& [loc, stop] : raw) used[static_cast<std::size_t>(loc)] = 1;
  for (std::size_t n = 0; n < names.size(); ++n) {
    if (used[n]) out.trace.locations.push_back(names[n]);
  }
  std::sort(out.trace.locations.begin(), out.trace.locations.end());
  std::vector<LocIndex> remap(names.size(), kNoLocation);
  for (std::size_t n = 0; n < names.size(); ++n) {
    if (used[n]) remap[n] = *out.trace.find_location(names[n]);
  }
  out.trace.stops.reserve(raw.size());
  for (auto& [loc, stop] : raw) {
    stop.loc = remap[static_cast<std::size_t>(loc)];
    out.trace.stops.push_back(stop);
  }

  // Ground truth straight from the schedules.
  if (spec.n_days > 0) {
    const Date last = spec.first_day + std::chrono::days{spec.n_days - 1};
    std::map<IsoWeek, std::vector<std::string>> home_weeks, work_weeks;
    for (Date d = spec.first_day; d <= last; d += std::chrono::days{1}) {
      if (const auto* h = active(spec.homes, d)) home_weeks[iso_week(d)].push_back(h->loc_id);
      if (!windows.business_days.contains(d)) continue;
      if (const auto* w = active(spec.works, d)) work_weeks[iso_week(d)].push_back(w->loc_id);
    }
    for (auto& [wk, locs] : home_weeks) out.home_weeks.push_back(make_entry(spec.user_id, wk, locs));
    for (auto& [wk, locs] : work_weeks) out.work_weeks.push_back(make_entry(spec.user_id, wk, locs));
  }
  std::vector<std::string> homes, works;
  for (const auto& e : spec.homes) homes.push_back(e.loc_id);
  for (const auto& e : spec.works) works.push_back(e.loc_id);
  if (!homes.empty()) out.home_user = make_entry(spec.user_id, std::nullopt, homes);
  if (!works.empty()) out.work_user = make_entry(spec.user_id, std::nullopt, works);
  return out;
}

void PopulationSpec::validate() const {
  if (users < 0 || days < 0) throw ConfigError("users and days must be >= 0");
  if (missing_rate_min < 0 || missing_rate_max >= 1.0 || missing_rate_min > missing_rate_max) {
    throw ConfigError("missing rates must satisfy 0 <= min <= max < 1");
  }
  if (multi_home_away_min < 0.0 || multi_home_away_max > 1.0 || multi_home_away_min > multi_home_away_max) {
    throw ConfigError("multi-home shares must satisfy 0 <= min <= max <= 1");
  }
  for (double s : {multi_home_share, near_work_share, move_share, job_change_share, errand_share, unemployed_share, leisure_rate}) {
    if (s < 0.0 || s > 1.0) throw ConfigError("population shares must be in [0,1]");
  }
  if (mix.commuter < 0 || mix.home_day < 0 || mix.away_day < 0 || mix.night_shift < 0 ||
      mix.commuter + mix.home_day + mix.away_day + mix.night_shift <= 0) {
    throw ConfigError("profile mix weights must be non-negative with a positive sum");
  }
}

std::vector<AgentSpec> make_population(const PopulationSpec& p) {
  p.validate();
  std::vector<AgentSpec> agents;
  agents.reserve(static_cast<std::size_t>(p.users));
  const int width = std::max<int>(5, static_cast<int>(std::to_string(p.users).size()));
  const Date last = p.start + std::chrono::days{std::max(p.days, 1) - 1};
  for (int u = 0; u < p.users; ++u) {
    std::mt19937_64 rng(derive_seed(p.seed, static_cast<std::uint64_t>(u)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    auto bearing = [&] { return between(0.0, 2 * std::numbers::pi); };
    auto change_day = [&] {
      std::uniform_int_distribution<int> d(static_cast<int>(p.days * 0.3), std::max(static_cast<int>(p.days * 0.7), 1));
      return p.start + std::chrono::days{d(rng)};
    };

    std::string id = std::to_string(u);
    AgentSpec a;
    const auto pad = static_cast<std::size_t>(width) > id.size() ? static_cast<std::size_t>(width) - id.size() : 0;
    a.user_id = p.id_prefix + std::string(pad, '0') + id;
    a.first_day = p.start;
    a.n_days = p.days;
    a.seed = derive_seed(p.seed ^ 0x5EEDULL, static_cast<std::uint64_t>(u));
    a.missing_rate = between(p.missing_rate_min, p.missing_rate_max);
    a.mix = p.mix;
    a.leisure_rate = p.leisure_rate;

    const std::string pre = a.user_id + "_";
    const LocationCoords center{"", 55.68 + between(-0.2, 0.2), 12.57 + between(-0.3, 0.3), std::nullopt};
    const LocationCoords home0 = offset(center, pre + "H0", between(0.0, 10.0), bearing());
    a.places.push_back(home0);

    if (unit(rng) < p.move_share) {
      const Date move = change_day();
      a.homes.push_back({pre + "H0", p.start, move - std::chrono::days{1}});
      a.homes.push_back({pre + "H1", move, last});
      a.places.push_back(offset(home0, pre + "H1", between(2.0, 20.0), bearing()));
    } else {
      a.homes.push_back({pre + "H0", p.start, last});
    }

    if (unit(rng) >= p.unemployed_share) {
      const bool near = unit(rng) < p.near_work_share;
      a.places.push_back(offset(home0, pre + "W0", near ? between(0.1, 0.45) : between(1.0, 15.0), bearing()));
      if (unit(rng) < p.job_change_share) {
        const Date change = change_day();
        a.works.push_back({pre + "W0", p.start, change - std::chrono::days{1}});
        a.works.push_back({pre + "W1", change, last});
        a.places.push_back(offset(home0, pre + "W1", between(1.0, 15.0), bearing()));
      } else {
        a.works.push_back({pre + "W0", p.start, last});
      }
    }

    a.away_loc = pre + "A";
    a.places.push_back(offset(home0, a.away_loc, between(5.0, 40.0), bearing()));
    if (unit(rng) < p.multi_home_share) {
      a.second_home = pre + "S";
      a.second_home_rate = between(p.multi_home_away_min, p.multi_home_away_max);
      a.places.push_back(offset(home0, *a.second_home, between(5.0, 40.0), bearing()));
    }
    for (int l = 0; l < 3; ++l) {
      a.leisure.push_back(pre + "L" + std::to_string(l));
      a.places.push_back(offset(home0, a.leisure.back(), between(0.6, 5.0), bearing()));
    }
    if (unit(rng) < p.errand_share) {
      a.errand = pre + "E";
      a.places.push_back(offset(home0, *a.errand, between(1.0, 3.0), bearing()));
    }
    agents.push_back(std::move(a));
  }
  return agents;
}

SyntheticPopulation generate_population(const std::vector<AgentSpec>& agents, int threads) {
  std::vector<SyntheticAgent> generated(agents.size());
  parallel_for(agents.size(), threads, [&](std::size_t i) { generated[i] = generate(agents[i]); });

  SyntheticPopulation pop;
  pop.traces.reserve(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    SyntheticAgent& g = generated[i];
    for (auto& e : g.home_weeks) pop.home_weeks.entries.push_back(std::move(e));
    for (auto& e : g.work_weeks) pop.work_weeks.entries.push_back(std::move(e));
    if (g.home_user) pop.home_users.entries.push_back(std::move(*g.home_user));
    if (g.work_user) pop.work_users.entries.push_back(std::move(*g.work_user));
    for (const auto& c : agents[i].places) pop.coords.emplace(c.loc_id, c);
    pop.traces.push_back(std::move(g.trace));
  }
  auto by_key = [](const TruthEntry& a, const TruthEntry& b) {
    return std::tie(a.user_id, a.week) < std::tie(b.user_id, b.week);
  };
  for (GroundTruth* t : {&pop.home_weeks, &pop.work_weeks, &pop.home_users, &pop.work_users}) {
    std::sort(t->entries.begin(), t->entries.end(), by_key);
  }
  std::sort(pop.traces.begin(), pop.traces.end(),
            [](const UserTrace& a, const UserTrace& b) { return a.user_id < b.user_id; });
  return pop;
}

}  // namespace howde
