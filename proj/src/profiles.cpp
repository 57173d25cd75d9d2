#include "howde/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "howde/binning.hpp"
#include "howde/parallel.hpp"

namespace howde {
namespace {

std::vector<CodeSequence> column_modes(std::span<const CodeSequence> seqs, std::span<const int> assignment,
                                       const std::vector<CodeSequence>& previous) {
  const std::size_t k = previous.size();
  std::vector<std::array<std::array<std::int64_t, kDayCodes>, kHoursPerDay>> counts(k);
  for (auto& c : counts)
    for (auto& col : c) col.fill(0);
  std::vector<std::int64_t> members(k, 0);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const auto c = static_cast<std::size_t>(assignment[i]);
    ++members[c];
    for (int h = 0; h < kHoursPerDay; ++h) ++counts[c][h][static_cast<int>(seqs[i][h])];
  }
  std::vector<CodeSequence> modes = previous;
  for (std::size_t c = 0; c < k; ++c) {
    if (members[c] == 0) continue;  // empty cluster keeps its mode
    for (int h = 0; h < kHoursPerDay; ++h) {
      int best = static_cast<int>(previous[c][h]);
      for (int code = 0; code < kDayCodes; ++code) {
        if (counts[c][h][code] > counts[c][h][best]) best = code;
      }
      // Among codes tied with the current symbol, the current one is kept;
      // otherwise the first (smallest) maximal code wins.
      modes[c][h] = static_cast<DayCode>(best);
    }
  }
  return modes;
}

// Returns true if any assignment changed.
bool assign(std::span<const CodeSequence> seqs, const std::vector<CodeSequence>& modes, std::vector<int>& assignment) {
  bool changed = false;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const int current = assignment[i];
    int best = current >= 0 ? current : 0;
    int best_d = hamming(seqs[i], modes[static_cast<std::size_t>(best)]);
    for (std::size_t c = 0; c < modes.size(); ++c) {
      const int d = hamming(seqs[i], modes[c]);
      if (d < best_d || (d == best_d && current < 0 && static_cast<int>(c) < best)) {
        best = static_cast<int>(c);
        best_d = d;
      }
    }
    if (best != current) {
      assignment[i] = best;
      changed = true;
    }
  }
  return changed;
}

std::int64_t total_cost(std::span<const CodeSequence> seqs, const std::vector<CodeSequence>& modes,
                        const std::vector<int>& assignment) {
  std::int64_t cost = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) cost += hamming(seqs[i], modes[static_cast<std::size_t>(assignment[i])]);
  return cost;
}

std::vector<CodeSequence> cao_seeds(std::span<const CodeSequence> seqs, int k, std::uint64_t seed) {
  std::vector<std::size_t> order(seqs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::array<std::array<std::int64_t, kDayCodes>, kHoursPerDay> freq{};
  for (const auto& s : seqs)
    for (int h = 0; h < kHoursPerDay; ++h) ++freq[h][static_cast<int>(s[h])];
  std::vector<std::int64_t> density(seqs.size(), 0);  // unnormalized; scale is irrelevant
  for (std::size_t i = 0; i < seqs.size(); ++i)
    for (int h = 0; h < kHoursPerDay; ++h) density[i] += freq[h][static_cast<int>(seqs[i][h])];

  std::vector<CodeSequence> modes;
  std::size_t first = order[0];
  for (std::size_t i : order)
    if (density[i] > density[first]) first = i;
  modes.push_back(seqs[first]);

  std::vector<int> nearest(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) nearest[i] = hamming(seqs[i], modes[0]);
  while (static_cast<int>(modes.size()) < k) {
    std::size_t pick = order[0];
    std::int64_t best = -1;
    for (std::size_t i : order) {
      const std::int64_t score = density[i] * nearest[i];
      if (score > best) {
        best = score;
        pick = i;
      }
    }
    modes.push_back(seqs[pick]);
    for (std::size_t i = 0; i < seqs.size(); ++i) nearest[i] = std::min(nearest[i], hamming(seqs[i], modes.back()));
  }
  return modes;
}

}  // namespace

std::string to_string(const CodeSequence& codes) {
  std::string out(kHoursPerDay, '.');
  for (int h = 0; h < kHoursPerDay; ++h) {
    out[static_cast<std::size_t>(h)] = codes[h] == DayCode::kTarget ? 'T' : codes[h] == DayCode::kOther ? 'O' : '.';
  }
  return out;
}

std::vector<DaySequence> encode_days(const std::string& user_id, std::span<const HourlyDay> days, LocIndex target,
                                     Scope scope) {
  std::vector<DaySequence> out;
  out.reserve(days.size());
  for (const HourlyDay& d : days) {
    DaySequence s{user_id, d.date, scope, {}};
    for (int h = 0; h < kHoursPerDay; ++h) {
      const LocIndex loc = d.slots[static_cast<std::size_t>(h)];
      s.codes[h] = loc == kNoLocation ? DayCode::kMissing : loc == target ? DayCode::kTarget : DayCode::kOther;
    }
    out.push_back(std::move(s));
  }
  return out;
}

int hamming(const CodeSequence& a, const CodeSequence& b) {
  int d = 0;
  for (int h = 0; h < kHoursPerDay; ++h) d += a[h] != b[h] ? 1 : 0;
  return d;
}

ClusterModel kmodes(std::span<const CodeSequence> sequences, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::set<CodeSequence> distinct(sequences.begin(), sequences.end());
  if (static_cast<std::size_t>(k) > distinct.size()) {
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " + std::to_string(distinct.size()) +
                                " distinct sequences");
  }
  ClusterModel m;
  m.k = k;
  m.modes = cao_seeds(sequences, k, seed);
  m.assignment.assign(sequences.size(), -1);
  assign(sequences, m.modes, m.assignment);
  m.cost_history.push_back(total_cost(sequences, m.modes, m.assignment));
  for (m.iterations = 1; m.iterations <= kKModesMaxIterations; ++m.iterations) {
    m.modes = column_modes(sequences, m.assignment, m.modes);
    const bool changed = assign(sequences, m.modes, m.assignment);
    m.cost_history.push_back(total_cost(sequences, m.modes, m.assignment));
    if (!changed) break;
  }
  m.iterations = std::min(m.iterations, kKModesMaxIterations);
  m.modes = column_modes(sequences, m.assignment, m.modes);
  m.cost = total_cost(sequences, m.modes, m.assignment);
  return m;
}

std::size_t elbow_index(std::span<const double> costs) {
  if (costs.size() < 3) return 0;
  const double first = costs.front();
  const double last = costs.back();
  const double steps = static_cast<double>(costs.size() - 1);
  const double eps = 1e-12 * std::max(1.0, std::abs(first - last));
  std::size_t best = 0;
  double best_gap = eps;
  for (std::size_t i = 1; i + 1 < costs.size(); ++i) {
    const double chord = first + (last - first) * static_cast<double>(i) / steps;
    const double gap = chord - costs[i];
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

ElbowResult elbow_k(std::span<const CodeSequence> sequences, int k_min, int k_max, std::uint64_t seed, int seeds,
                    int threads) {
  const std::set<CodeSequence> distinct(sequences.begin(), sequences.end());
  k_max = std::min<int>(k_max, static_cast<int>(distinct.size()));
  k_min = std::max(1, k_min);
  if (k_max < k_min) throw std::invalid_argument("empty k range");
  seeds = std::max(1, seeds);

  ElbowResult r;
  for (int k = k_min; k <= k_max; ++k) r.ks.push_back(k);
  const std::size_t runs = r.ks.size() * static_cast<std::size_t>(seeds);
  std::vector<std::int64_t> cost(runs);
  parallel_for(runs, threads, [&](std::size_t job) {
    const int k = r.ks[job / static_cast<std::size_t>(seeds)];
    cost[job] = kmodes(sequences, k, derive_seed(seed, job % static_cast<std::size_t>(seeds))).cost;
  });
  for (std::size_t i = 0; i < r.ks.size(); ++i) {
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) sum += static_cast<double>(cost[i * static_cast<std::size_t>(seeds) + s]);
    r.mean_costs.push_back(sum / seeds);
  }
  r.k = r.ks[elbow_index(r.mean_costs)];
  return r;
}

double profile_entropy(std::span<const std::int64_t> counts, int k) {
  if (k <= 1) return 0.0;
  std::int64_t n = 0;
  for (auto c : counts) n += c;
  if (n <= 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(k));
}

namespace {

double entropy_of(std::span<const int> clusters, int k) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(std::max(k, 1)), 0);
  for (int c : clusters) ++counts[static_cast<std::size_t>(c)];
  return profile_entropy(counts, k);
}

}  // namespace

double mean_entropy(std::span<const UserAssignments> users, int k) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& u : users) {
    if (u.clusters.empty()) continue;
    sum += entropy_of(u.clusters, k);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double permuted_mean_entropy(std::span<const UserAssignments> users, int k, std::span<const std::size_t> permutation) {
  std::vector<int> pooled;
  for (const auto& u : users) pooled.insert(pooled.end(), u.clusters.begin(), u.clusters.end());
  if (permutation.size() != pooled.size()) throw std::invalid_argument("permutation size mismatch");
  double sum = 0.0;
  std::size_t n = 0, pos = 0;
  std::vector<int> mine;
  for (const auto& u : users) {
    mine.clear();
    for (std::size_t j = 0; j < u.clusters.size(); ++j) mine.push_back(pooled[permutation[pos++]]);
    if (mine.empty()) continue;
    sum += entropy_of(mine, k);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double entropy_null(std::span<const UserAssignments> users, int k, std::uint64_t seed, int repetitions) {
  std::size_t total = 0;
  for (const auto& u : users) total += u.clusters.size();
  std::vector<std::size_t> perm(total);
  double sum = 0.0;
  repetitions = std::max(1, repetitions);
  for (int r = 0; r < repetitions; ++r) {
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::shuffle(perm.begin(), perm.end(), rng);
    sum += permuted_mean_entropy(users, k, perm);
  }
  return sum / repetitions;
}

std::vector<ClusterRow> cluster_report(const ClusterModel& model) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(model.k), 0);
  for (int c : model.assignment) ++sizes[static_cast<std::size_t>(c)];
  std::vector<ClusterRow> rows;
  const auto n = static_cast<double>(std::max<std::size_t>(model.assignment.size(), 1));
  for (int c = 0; c < model.k; ++c) {
    rows.push_back({c, static_cast<double>(sizes[static_cast<std::size_t>(c)]) / n, to_string(model.modes[c])});
  }
  return rows;
}

std::vector<DaySequence> profile_sequences(std::span<const UserTrace> traces, std::span<const UserLabels> labels,
                                           Scope scope, const TimeWindows& windows) {
  if (traces.size() != labels.size()) throw std::invalid_argument("profile_sequences: traces and labels differ in size");
  std::vector<DaySequence> out;
  std::vector<std::size_t> counts;
  for (std::size_t u = 0; u < traces.size(); ++u) {
    const UserTrace& t = traces[u];
    const UserLabels& l = labels[u];
    if (t.user_id != l.user_id) throw std::invalid_argument("profile_sequences: traces and labels are not aligned");
    counts.assign(l.locations.size(), 0);
    for (const DayLabel& d : l.days) {
      const LocationLabel& x = l.label(d, scope);
      if (x.detected()) ++counts[x.loc];
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
      if (counts[i] > counts[best]) best = i;
    }
    if (counts.empty() || counts[best] == 0) continue;
    const auto target = t.find_location(l.locations[best]);
    if (!target) continue;
    std::vector<HourlyDay> days = bin_hours(t);
    if (scope == Scope::kWork) {
      std::erase_if(days, [&](const HourlyDay& d) { return !windows.business_days.contains(d.date); });
    }
    auto seqs = encode_days(t.user_id, days, *target, scope);
    out.insert(out.end(), std::make_move_iterator(seqs.begin()), std::make_move_iterator(seqs.end()));
  }
  return out;
}

std::vector<UserAssignments> user_assignments(std::span<const DaySequence> sequences, const ClusterModel& model) {
  std::vector<UserAssignments> out;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    if (out.empty() || out.back().user_id != sequences[i].user_id) out.push_back({sequences[i].user_id, {}});
    out.back().clusters.push_back(model.assignment[i]);
  }
  return out;
}

}  // namespace howde
