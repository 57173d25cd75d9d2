#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "howde/model.hpp"

namespace howde {

inline constexpr Seconds kAnonymizeGrid = 600;

// Monday of ISO week 1970-W01.
inline const Date kAnonymizeEpochMonday = Date{std::chrono::year{1969} / std::chrono::December / 29};

struct AnonymizeOptions {
  std::uint64_t seed = 0;
  Seconds grid = kAnonymizeGrid;
};

// Per user: floors start and end to the grid (dropping stops that become
// empty), shifts by whole weeks so the first stop falls in 1970-W01, splits
// stops at midnight and permutes, within each ISO week, weekday dates among
// weekdays and weekend dates among weekend days.
UserTrace anonymize(const UserTrace& trace, const AnonymizeOptions& opts);
std::vector<UserTrace> anonymize(std::span<const UserTrace> traces, const AnonymizeOptions& opts, int threads);

// Stable 64-bit FNV-1a hash, used to derive per-user random streams.
std::uint64_t stable_hash(std::string_view s);

}  // namespace howde
