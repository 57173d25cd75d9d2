#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "howde/model.hpp"

namespace howde {

enum class DayCode : std::uint8_t { kTarget = 0, kOther = 1, kMissing = 2 };
inline constexpr int kDayCodes = 3;

using CodeSequence = std::array<DayCode, kHoursPerDay>;

struct DaySequence {
  std::string user_id;
  Date date;
  Scope scope = Scope::kHome;
  CodeSequence codes{};
};

// 'T' target, 'O' other, '.' missing.
std::string to_string(const CodeSequence& codes);

// TARGET where the slot holds `target`, OTHER for any other location
// (including home when profiling work), MISSING for empty slots.
std::vector<DaySequence> encode_days(const std::string& user_id, std::span<const HourlyDay> days, LocIndex target,
                                     Scope scope);

int hamming(const CodeSequence& a, const CodeSequence& b);

struct ClusterModel {
  int k = 0;
  std::vector<CodeSequence> modes;
  std::vector<int> assignment;  // cluster index per input sequence
  std::int64_t cost = 0;        // sum of Hamming distances to the assigned mode
  int iterations = 0;
  std::vector<std::int64_t> cost_history;  // cost after each assignment step
};

inline constexpr int kKModesMaxIterations = 100;

// K-Modes with Hamming dissimilarity and density-based (Cao) seeding. The
// seed permutes the input order, which decides ties during seeding.
// Throws std::invalid_argument when k < 1 or k exceeds the distinct sequences.
ClusterModel kmodes(std::span<const CodeSequence> sequences, int k, std::uint64_t seed);

// Index of the knee of a decreasing cost curve: the point farthest below the
// chord joining its endpoints. Returns 0 when no point lies below the chord.
std::size_t elbow_index(std::span<const double> costs);

struct ElbowResult {
  int k = 0;
  std::vector<int> ks;
  std::vector<double> mean_costs;
};

// Mean K-Modes cost over `seeds` runs for each k in [k_min, k_max], then the
// knee of that curve. k_max is clipped to the number of distinct sequences.
ElbowResult elbow_k(std::span<const CodeSequence> sequences, int k_min, int k_max, std::uint64_t seed,
                    int seeds = 3, int threads = 1);

// Normalized Shannon entropy (natural log) of cluster counts; 0 when k == 1.
double profile_entropy(std::span<const std::int64_t> counts, int k);

struct UserAssignments {
  std::string user_id;
  std::vector<int> clusters;  // one cluster index per day
};

double mean_entropy(std::span<const UserAssignments> users, int k);

// Mean entropy after relabelling the pooled day->cluster labels with
// `permutation` (a permutation of all days, in user order).
double permuted_mean_entropy(std::span<const UserAssignments> users, int k, std::span<const std::size_t> permutation);

// Null model: the pooled labels are shuffled across all user-days (global
// cluster frequencies and per-user day counts preserved), averaged over R draws.
double entropy_null(std::span<const UserAssignments> users, int k, std::uint64_t seed, int repetitions);

struct ClusterRow {
  int cluster = 0;
  double size_fraction = 0.0;
  std::string mode;
};

std::vector<ClusterRow> cluster_report(const ClusterModel& model);

// Day sequences of every user relative to the user's most frequently detected
// location for `scope` (ties to the smaller id). WORK keeps business days
// only. Users without a detection contribute nothing. `labels` must be
// aligned with `traces`.
std::vector<DaySequence> profile_sequences(std::span<const UserTrace> traces, std::span<const UserLabels> labels,
                                           Scope scope, const TimeWindows& windows);

// Groups a model's assignment by user, in the order users first appear.
std::vector<UserAssignments> user_assignments(std::span<const DaySequence> sequences, const ClusterModel& model);

}  // namespace howde
