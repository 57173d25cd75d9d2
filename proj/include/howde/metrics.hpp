#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "howde/model.hpp"

namespace howde {

enum class Granularity : std::uint8_t { kUserWeek, kUser };

// Labels and ground truth cannot be compared (no shared users).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TruthEntry {
  std::string user_id;
  std::optional<IsoWeek> week;         // set for USER_WEEK granularity
  std::vector<std::string> locations;  // non-empty, ascending
};

struct GroundTruth {
  Scope scope = Scope::kHome;
  Granularity granularity = Granularity::kUserWeek;
  std::vector<TruthEntry> entries;  // ascending (user, week)
};

// Modal detected location over the days of `week`; ties go to the smaller id.
// kNoLocation when no day of the week is detected.
LocIndex weekly_label(const UserLabels& labels, Scope scope, IsoWeek week);

struct KeyOutcome {
  bool detected = false;
  bool matched = false;
};

// One outcome per truth entry. USER_WEEK keys use weekly_label; USER keys
// match if any detected label of the period is among the truth locations.
std::vector<KeyOutcome> match_keys(std::span<const UserLabels> labels, const GroundTruth& truth);

struct PointMetrics {
  std::size_t n_truth = 0;
  std::size_t n_detected = 0;
  std::size_t n_matched = 0;
  double detected_accuracy = 0.0;  // n_matched / n_detected; NaN when nothing detected
  double frac_not_detected = 0.0;  // 1 - n_detected / n_truth
};

// Metrics of the multiset of outcomes picked by `indices`.
PointMetrics point_metrics(std::span<const KeyOutcome> outcomes, std::span<const std::size_t> indices);
PointMetrics point_metrics(std::span<const KeyOutcome> outcomes);

struct BootstrapSummary {
  int replicates = 0;
  double acc_stddev = 0.0;
  double fnd_stddev = 0.0;
  double acc_ci_low = 0.0, acc_ci_high = 0.0;  // 2.5% / 97.5% percentiles
  double fnd_ci_low = 0.0, fnd_ci_high = 0.0;
};

// Resamples keys with replacement; replicate b draws from an RNG seeded by
// (seed, b), so the result is independent of the thread count.
BootstrapSummary bootstrap(std::span<const KeyOutcome> outcomes, int replicates, std::uint64_t seed, int threads = 1);

struct EvalReport {
  PointMetrics point;
  BootstrapSummary spread;
};

EvalReport evaluate(std::span<const UserLabels> labels, const GroundTruth& truth, int bootstrap_replicates,
                    std::uint64_t seed, int threads = 1);

// Users with stops on at least `min_days_with_data` calendar days, ascending.
std::vector<std::string> prefilter_users(std::span<const UserTrace> traces, int min_days_with_data);

}  // namespace howde
