#include "howde/detector.hpp"

#include <algorithm>

#include "exact.hpp"
#include "howde/parallel.hpp"

namespace howde {
namespace {

using detail::Threshold;

struct WindowBounds {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
};

WindowBounds window_bounds(std::int64_t i, std::int64_t n, int delta, WindowMode mode) {
  switch (mode) {
    case WindowMode::kCentered:
      return {std::max<std::int64_t>(0, i - delta / 2), std::min(n - 1, i + delta / 2)};
    case WindowMode::kPastOnly:
      return {std::max<std::int64_t>(0, i - delta), i};
    case WindowMode::kFullPeriod:
      return {0, n - 1};
  }
  return {};
}

// Scope-relevant dates of the observation span: every date for HOME,
// business days only for WORK.
std::vector<Date> scope_dates(ObservationSpan span, Scope scope, const TimeWindows& windows) {
  std::vector<Date> out;
  for (Date d = span.first; d <= span.last; d += std::chrono::days{1}) {
    if (scope == Scope::kWork && !windows.business_days.contains(d)) continue;
    out.push_back(d);
  }
  return out;
}

std::int64_t scaled(int count, int bins_with_data) { return count * (kFractionScale / bins_with_data); }

bool coverage_gate_fails(int with_data, int span_days, const Threshold& threshold) {
  return span_days == 0 || !threshold.at_least(with_data, span_days);
}

struct ScopeThresholds {
  Threshold c_days;
  Threshold f_hours;
  Threshold f_days;

  ScopeThresholds(const HowdeParams& p, Scope s) : c_days(p.C_days(s)), f_hours(p.f_hours(s)), f_days(p.f_days_W) {}
};

// Ranking keys; all comparisons are on integers sharing a denominator.
bool better_by_hours(const LocationTally& a, const LocationTally& b) {
  if (a.scaled_fraction_sum != b.scaled_fraction_sum) return a.scaled_fraction_sum > b.scaled_fraction_sum;
  if (a.days_visited != b.days_visited) return a.days_visited > b.days_visited;
  return a.loc < b.loc;
}

bool better_by_days(const LocationTally& a, const LocationTally& b) {
  if (a.days_visited != b.days_visited) return a.days_visited > b.days_visited;
  if (a.scaled_fraction_sum != b.scaled_fraction_sum) return a.scaled_fraction_sum > b.scaled_fraction_sum;
  return a.loc < b.loc;
}

struct WindowState {
  bool anchor_has_data = false;
  int with_data = 0;
  int span_days = 0;
  std::span<const LocationTally> tallies;
};

LocationLabel select_home(const WindowState& w, const ScopeThresholds& p) {
  if (!w.anchor_has_data) return LocationLabel::undetected(Status::kDayCoverage);
  if (coverage_gate_fails(w.with_data, w.span_days, p.c_days)) return LocationLabel::undetected(Status::kWindowCoverage);
  const std::int64_t denom = static_cast<std::int64_t>(w.with_data) * kFractionScale;
  const LocationTally* best = nullptr;
  for (const LocationTally& t : w.tallies) {
    if (!p.f_hours.at_least(t.scaled_fraction_sum, denom)) continue;
    if (best == nullptr || better_by_hours(t, *best)) best = &t;
  }
  if (best == nullptr) return LocationLabel::undetected(Status::kNoCandidate);
  return LocationLabel::found(best->loc);
}

LocationLabel select_work(const WindowState& w, const ScopeThresholds& p) {
  if (!w.anchor_has_data) return LocationLabel::undetected(Status::kDayCoverage);
  if (coverage_gate_fails(w.with_data, w.span_days, p.c_days)) return LocationLabel::undetected(Status::kWindowCoverage);
  const std::int64_t denom = static_cast<std::int64_t>(w.with_data) * kFractionScale;
  const LocationTally* by_days = nullptr;
  const LocationTally* by_hours = nullptr;
  for (const LocationTally& t : w.tallies) {
    if (!p.f_hours.at_least(t.scaled_fraction_sum, denom)) continue;
    if (by_hours == nullptr || better_by_hours(t, *by_hours)) by_hours = &t;
    if (!p.f_days.at_least(t.days_visited, w.with_data)) continue;
    if (by_days == nullptr || better_by_days(t, *by_days)) by_days = &t;
  }
  if (by_days != nullptr) return LocationLabel::found(by_days->loc);
  if (by_hours != nullptr) return LocationLabel::found(by_hours->loc);
  return LocationLabel::undetected(Status::kNoCandidate);
}

// Covered days of one scope in compact form, indexed by scope-date position.
struct ScopeSeries {
  std::vector<Date> dates;
  std::vector<std::int32_t> offsets;  // size dates+1; entries of covered days only
  std::vector<std::pair<LocIndex, std::int64_t>> entries;
  std::vector<std::uint8_t> covered;
  std::vector<LocIndex> locations;  // every loc appearing in a covered day, ascending
};

ScopeSeries build_series(std::span<const HourlyDay> days, ObservationSpan span, Scope scope,
                         const HowdeParams& params, std::size_t n_locations) {
  ScopeSeries s;
  s.dates = scope_dates(span, scope, params.windows);
  s.offsets.reserve(s.dates.size() + 1);
  s.covered.assign(s.dates.size(), 0);
  std::vector<std::uint8_t> seen(n_locations, 0);
  std::size_t next_day = 0;
  for (std::size_t i = 0; i < s.dates.size(); ++i) {
    s.offsets.push_back(static_cast<std::int32_t>(s.entries.size()));
    while (next_day < days.size() && days[next_day].date < s.dates[i]) ++next_day;
    if (next_day == days.size() || days[next_day].date != s.dates[i]) continue;
    const DayFeature f = day_feature(days[next_day], scope, params);
    if (!f.coverage_ok) continue;
    s.covered[i] = 1;
    for (auto [loc, count] : f.bins_by_loc) {
      s.entries.emplace_back(loc, scaled(count, f.bins_with_data));
      seen[loc] = 1;
    }
  }
  s.offsets.push_back(static_cast<std::int32_t>(s.entries.size()));
  for (std::size_t l = 0; l < n_locations; ++l) {
    if (seen[l]) s.locations.push_back(static_cast<LocIndex>(l));
  }
  return s;
}

// Slides the window across all anchors of one scope, adding entering days and
// removing leaving ones, and writes one label per anchor.
template <typename Emit>
void sweep_scope(const ScopeSeries& s, Scope scope, const HowdeParams& params, std::size_t n_locations, Emit&& emit) {
  const auto n = static_cast<std::int64_t>(s.dates.size());
  std::vector<std::int64_t> sums(n_locations, 0);
  std::vector<int> visits(n_locations, 0);
  std::vector<LocationTally> tallies;
  tallies.reserve(s.locations.size());
  int with_data = 0;
  const ScopeThresholds thresholds(params, scope);

  auto apply = [&](std::int64_t day, int sign) {
    if (!s.covered[static_cast<std::size_t>(day)]) return;
    with_data += sign;
    for (auto k = s.offsets[static_cast<std::size_t>(day)]; k < s.offsets[static_cast<std::size_t>(day) + 1]; ++k) {
      const auto& [loc, value] = s.entries[static_cast<std::size_t>(k)];
      sums[loc] += sign * value;
      visits[loc] += sign;
    }
  };

  std::int64_t lo = 0, hi = -1;
  for (std::int64_t i = 0; i < n; ++i) {
    const WindowBounds b = window_bounds(i, n, params.delta_T(scope), params.window_mode);
    while (hi < b.hi) apply(++hi, +1);
    while (lo < b.lo) apply(lo++, -1);

    tallies.clear();
    for (LocIndex loc : s.locations) {
      if (visits[loc] > 0) tallies.push_back({loc, sums[loc], visits[loc]});
    }
    const WindowState state{s.covered[static_cast<std::size_t>(i)] != 0, with_data,
                            static_cast<int>(b.hi - b.lo + 1), tallies};
    emit(static_cast<std::size_t>(i),
         scope == Scope::kHome ? select_home(state, thresholds) : select_work(state, thresholds));
  }
}

}  // namespace

double WindowAggregate::avg_frac(LocIndex loc) const {
  for (const auto& t : tallies) {
    if (t.loc == loc) {
      return static_cast<double>(t.scaled_fraction_sum) /
             static_cast<double>(static_cast<std::int64_t>(days_in_window_with_data) * kFractionScale);
    }
  }
  return 0.0;
}

double WindowAggregate::frac_days_visited(LocIndex loc) const {
  for (const auto& t : tallies) {
    if (t.loc == loc) return static_cast<double>(t.days_visited) / days_in_window_with_data;
  }
  return 0.0;
}

ObservationSpan observation_span(std::span<const HourlyDay> days) {
  if (days.empty()) return {};
  return {days.front().date, days.back().date};
}

WindowAggregate build_window(std::span<const DayFeature> features, Date anchor, Scope scope,
                             const HowdeParams& params, ObservationSpan span) {
  WindowAggregate agg;
  agg.anchor = anchor;
  agg.scope = scope;
  const std::vector<Date> dates = scope_dates(span, scope, params.windows);
  auto it = std::lower_bound(dates.begin(), dates.end(), anchor);
  if (it == dates.end() || *it != anchor) return agg;

  const auto n = static_cast<std::int64_t>(dates.size());
  const WindowBounds b = window_bounds(it - dates.begin(), n, params.delta_T(scope), params.window_mode);
  agg.window_span_days = static_cast<int>(b.hi - b.lo + 1);
  const Date first = dates[static_cast<std::size_t>(b.lo)];
  const Date last = dates[static_cast<std::size_t>(b.hi)];

  for (const DayFeature& f : features) {
    if (f.scope != scope || f.date < first || f.date > last || !f.coverage_ok) continue;
    if (scope == Scope::kWork && !params.windows.business_days.contains(f.date)) continue;
    if (f.date == anchor) agg.anchor_has_data = true;
    ++agg.days_in_window_with_data;
    for (auto [loc, count] : f.bins_by_loc) {
      auto t = std::lower_bound(agg.tallies.begin(), agg.tallies.end(), loc,
                                [](const LocationTally& x, LocIndex l) { return x.loc < l; });
      if (t == agg.tallies.end() || t->loc != loc) t = agg.tallies.insert(t, LocationTally{loc, 0, 0});
      t->scaled_fraction_sum += scaled(count, f.bins_with_data);
      ++t->days_visited;
    }
  }
  return agg;
}

LocationLabel detect_home(const WindowAggregate& agg, const HowdeParams& params) {
  return select_home({agg.anchor_has_data, agg.days_in_window_with_data, agg.window_span_days, agg.tallies},
                     ScopeThresholds(params, Scope::kHome));
}

LocationLabel detect_work(const WindowAggregate& agg, const HowdeParams& params) {
  if (!params.windows.business_days.contains(agg.anchor)) return LocationLabel::undetected(Status::kNonBusinessDay);
  return select_work({agg.anchor_has_data, agg.days_in_window_with_data, agg.window_span_days, agg.tallies},
                     ScopeThresholds(params, Scope::kWork));
}

UserLabels run_howde(const UserTrace& trace, const HowdeParams& params) {
  UserLabels out;
  out.user_id = trace.user_id;
  out.locations = trace.locations;
  const std::vector<HourlyDay> days = bin_hours(trace);
  if (days.empty()) return out;
  const ObservationSpan span = observation_span(days);
  const std::size_t n_locs = trace.locations.size();

  for (Date d = span.first; d <= span.last; d += std::chrono::days{1}) {
    out.days.push_back({d, {}, LocationLabel::undetected(Status::kNonBusinessDay)});
  }

  const ScopeSeries home = build_series(days, span, Scope::kHome, params, n_locs);
  sweep_scope(home, Scope::kHome, params, n_locs, [&](std::size_t i, LocationLabel l) { out.days[i].home = l; });

  const ScopeSeries work = build_series(days, span, Scope::kWork, params, n_locs);
  sweep_scope(work, Scope::kWork, params, n_locs, [&](std::size_t i, LocationLabel l) {
    out.days[static_cast<std::size_t>((work.dates[i] - span.first).count())].work = l;
  });
  return out;
}

std::vector<UserLabels> run_howde(std::span<const UserTrace> traces, const HowdeParams& params, int threads) {
  params.validate();
  std::vector<UserLabels> out(traces.size());
  parallel_for(traces.size(), threads, [&](std::size_t i) { out[i] = run_howde(traces[i], params); });
  return out;
}

}  // namespace howde
