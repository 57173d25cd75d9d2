#include "howde/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "howde/parallel.hpp"

namespace howde {
namespace {

double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) return std::nan("");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

bool contains(const std::vector<std::string>& sorted, std::string_view id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

}  // namespace

LocIndex weekly_label(const UserLabels& labels, Scope scope, IsoWeek week) {
  const Date monday = iso_week_monday(week);
  const Date sunday = monday + std::chrono::days{6};
  std::map<LocIndex, int> votes;
  auto it = std::lower_bound(labels.days.begin(), labels.days.end(), monday,
                             [](const DayLabel& d, Date x) { return d.date < x; });
  for (; it != labels.days.end() && it->date <= sunday; ++it) {
    const LocationLabel& l = labels.label(*it, scope);
    if (l.detected()) ++votes[l.loc];
  }
  LocIndex best = kNoLocation;
  int best_votes = 0;
  for (auto [loc, n] : votes) {  // ascending loc, so strict > keeps the smaller id on ties
    if (n > best_votes) {
      best = loc;
      best_votes = n;
    }
  }
  return best;
}

std::vector<KeyOutcome> match_keys(std::span<const UserLabels> labels, const GroundTruth& truth) {
  std::unordered_map<std::string_view, const UserLabels*> by_user;
  for (const UserLabels& u : labels) by_user.emplace(u.user_id, &u);

  std::vector<KeyOutcome> out;
  out.reserve(truth.entries.size());
  bool any_shared = false;
  for (const TruthEntry& e : truth.entries) {
    auto it = by_user.find(e.user_id);
    if (it == by_user.end()) {
      out.push_back({});
      continue;
    }
    any_shared = true;
    const UserLabels& u = *it->second;
    KeyOutcome k;
    if (truth.granularity == Granularity::kUserWeek) {
      if (!e.week) throw ProtocolError("USER_WEEK truth entry for " + e.user_id + " has no week");
      const LocIndex loc = weekly_label(u, truth.scope, *e.week);
      k.detected = loc != kNoLocation;
      k.matched = k.detected && contains(e.locations, u.location(loc));
    } else {
      for (const DayLabel& d : u.days) {
        const LocationLabel& l = u.label(d, truth.scope);
        if (!l.detected()) continue;
        k.detected = true;
        if (contains(e.locations, u.location(l.loc))) {
          k.matched = true;
          break;
        }
      }
    }
    out.push_back(k);
  }
  if (!truth.entries.empty() && !any_shared) {
    throw ProtocolError("labels and ground truth share no users");
  }
  return out;
}

PointMetrics point_metrics(std::span<const KeyOutcome> outcomes, std::span<const std::size_t> indices) {
  PointMetrics m;
  m.n_truth = indices.size();
  for (std::size_t i : indices) {
    m.n_detected += outcomes[i].detected ? 1 : 0;
    m.n_matched += outcomes[i].matched ? 1 : 0;
  }
  m.detected_accuracy =
      m.n_detected == 0 ? std::nan("") : static_cast<double>(m.n_matched) / static_cast<double>(m.n_detected);
  m.frac_not_detected =
      m.n_truth == 0 ? std::nan("") : 1.0 - static_cast<double>(m.n_detected) / static_cast<double>(m.n_truth);
  return m;
}

PointMetrics point_metrics(std::span<const KeyOutcome> outcomes) {
  std::vector<std::size_t> all(outcomes.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return point_metrics(outcomes, all);
}

BootstrapSummary bootstrap(std::span<const KeyOutcome> outcomes, int replicates, std::uint64_t seed, int threads) {
  BootstrapSummary s;
  s.replicates = replicates;
  if (replicates <= 0 || outcomes.empty()) return s;
  std::vector<PointMetrics> reps(static_cast<std::size_t>(replicates));
  parallel_for(reps.size(), threads, [&](std::size_t b) {
    std::mt19937_64 rng(derive_seed(seed, b));
    std::uniform_int_distribution<std::size_t> pick(0, outcomes.size() - 1);
    std::vector<std::size_t> idx(outcomes.size());
    for (auto& i : idx) i = pick(rng);
    reps[b] = point_metrics(outcomes, idx);
  });
  std::vector<double> acc, fnd;
  for (const PointMetrics& m : reps) {
    if (!std::isnan(m.detected_accuracy)) acc.push_back(m.detected_accuracy);
    fnd.push_back(m.frac_not_detected);
  }
  s.acc_stddev = stddev(acc);
  s.fnd_stddev = stddev(fnd);
  s.acc_ci_low = percentile(acc, 0.025);
  s.acc_ci_high = percentile(acc, 0.975);
  s.fnd_ci_low = percentile(fnd, 0.025);
  s.fnd_ci_high = percentile(fnd, 0.975);
  return s;
}

EvalReport evaluate(std::span<const UserLabels> labels, const GroundTruth& truth, int bootstrap_replicates,
                    std::uint64_t seed, int threads) {
  const std::vector<KeyOutcome> outcomes = match_keys(labels, truth);
  return {point_metrics(outcomes), bootstrap(outcomes, bootstrap_replicates, seed, threads)};
}

std::vector<std::string> prefilter_users(std::span<const UserTrace> traces, int min_days_with_data) {
  std::vector<std::string> out;
  for (const UserTrace& t : traces) {
    std::int64_t days = 0;
    std::int64_t last_counted = std::numeric_limits<std::int64_t>::min();
    for (const Stop& s : t.stops) {
      const std::int64_t first = day_number(date_of(s.start));
      const std::int64_t last = day_number(date_of(s.end - 1));
      const std::int64_t from = std::max(first, last_counted + 1);
      if (last >= from) {
        days += last - from + 1;
        last_counted = last;
      }
    }
    if (days >= min_days_with_data) out.push_back(t.user_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace howde
