#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "howde/model.hpp"

namespace howde {

inline constexpr double kEarthRadiusKm = 6371.0088;

struct LocationCoords {
  std::string loc_id;
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
  std::optional<std::string> region_id;
};

using CoordinateTable = std::unordered_map<std::string, LocationCoords>;

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const LocationCoords& a, const LocationCoords& b);

// ---- employment ----------------------------------------------------------

struct RegionRate {
  std::string region_id;
  std::size_t users = 0;
  std::size_t employed = 0;
  double rate = 0.0;
};

struct EmploymentResult {
  std::vector<RegionRate> regions;  // ascending region id
  std::size_t users_without_region = 0;
};

// True if some calendar span of at least `min_stable_days` has a single
// detected work location at both endpoints and no other detected work
// location in between (undetected days are ignored).
bool has_stable_work(const UserLabels& labels, int min_stable_days);

// Users listed in `region_of` but absent from `labels` count as not employed;
// labelled users missing from `region_of` are excluded and counted.
EmploymentResult employment_rate(std::span<const UserLabels> labels,
                                 const std::map<std::string, std::string>& region_of, int min_stable_days);

// User -> region of the most frequently detected home (ties to the smaller
// location id). Users without a detected home or a home region are omitted.
std::map<std::string, std::string> home_regions(std::span<const UserLabels> labels, const CoordinateTable& coords);

// ---- commuting -----------------------------------------------------------

struct GroupCommute {
  std::string group;
  std::size_t users = 0;
  double mean_km = 0.0;
  double stderr_km = 0.0;
};

struct CommuteResult {
  std::vector<GroupCommute> groups;  // ascending group id
  std::size_t days_missing_coords = 0;
  std::size_t users_without_group = 0;
};

// Mean home-work distance per user over days with both labels detected, then
// mean and standard error across users of each group.
CommuteResult commute_stats(std::span<const UserLabels> labels, const CoordinateTable& coords,
                            const std::map<std::string, std::string>& group_of);

// ---- comparison with reference statistics ---------------------------------

struct ReferenceComparison {
  double pearson_r = 0.0;
  double mean_relative_error = 0.0;
  std::size_t regions_compared = 0;
  std::size_t zero_reference_excluded = 0;
};

// Pearson correlation and mean |est - ref| / ref over regions present in
// both maps. Throws std::invalid_argument with fewer than two shared regions.
ReferenceComparison compare_to_reference(const std::map<std::string, double>& estimates,
                                         const std::map<std::string, double>& reference);

}  // namespace howde
