#include "howde/anonymize.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "howde/parallel.hpp"

namespace howde {

std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

UserTrace anonymize(const UserTrace& trace, const AnonymizeOptions& opts) {
  if (opts.grid <= 0) throw ConfigError("anonymize grid must be positive");
  UserTrace out;
  out.user_id = trace.user_id;
  out.locations = trace.locations;

  // Floor to the grid and split at midnight.
  std::vector<Stop> pieces;
  for (const Stop& s : trace.stops) {
    const Seconds a = floor_div(s.start, opts.grid) * opts.grid;
    const Seconds b = floor_div(s.end, opts.grid) * opts.grid;
    for (Seconds t = a; t < b;) {
      const Seconds next = std::min(b, start_of(date_of(t)) + kSecondsPerDay);
      pieces.push_back({s.loc, t, next});
      t = next;
    }
  }
  if (pieces.empty()) return out;

  const Date first_monday = iso_week_monday(iso_week(date_of(pieces.front().start)));
  const Seconds shift = start_of(kAnonymizeEpochMonday) - start_of(first_monday);

  // Day permutation per ISO week, keyed by the shifted week's Monday.
  const std::uint64_t user_seed = derive_seed(opts.seed, stable_hash(trace.user_id));
  std::map<std::int64_t, std::array<int, 7>> perms;
  auto perm_for = [&](std::int64_t week_index) -> const std::array<int, 7>& {
    auto [it, inserted] = perms.try_emplace(week_index);
    if (inserted) {
      std::array<int, 7>& p = it->second;
      for (int i = 0; i < 7; ++i) p[i] = i;
      std::mt19937_64 rng(derive_seed(user_seed, static_cast<std::uint64_t>(week_index)));
      std::shuffle(p.begin(), p.begin() + 5, rng);
      std::shuffle(p.begin() + 5, p.end(), rng);
    }
    return it->second;
  };

  out.stops.reserve(pieces.size());
  const std::int64_t epoch_day = day_number(kAnonymizeEpochMonday);
  for (const Stop& p : pieces) {
    const Seconds s = p.start + shift;
    const Seconds e = p.end + shift;
    const std::int64_t day = floor_div(s, kSecondsPerDay);
    const std::int64_t week = floor_div(day - epoch_day, 7);
    const int dow = static_cast<int>(day - epoch_day - week * 7);
    const Seconds moved = static_cast<Seconds>(perm_for(week)[dow] - dow) * kSecondsPerDay;
    out.stops.push_back({p.loc, s + moved, e + moved});
  }
  std::sort(out.stops.begin(), out.stops.end(), [](const Stop& a, const Stop& b) {
    return std::tie(a.start, a.end, a.loc) < std::tie(b.start, b.end, b.loc);
  });
  return out;
}

std::vector<UserTrace> anonymize(std::span<const UserTrace> traces, const AnonymizeOptions& opts, int threads) {
  std::vector<UserTrace> out(traces.size());
  parallel_for(traces.size(), threads, [&](std::size_t i) { out[i] = anonymize(traces[i], opts); });
  return out;
}

}  // namespace howde
