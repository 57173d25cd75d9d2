#include "howde/apps.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace howde {
namespace {

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  out.stderr_ = sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

}  // namespace

double haversine_km(const LocationCoords& a, const LocationCoords& b) {
  const double dlat = radians(b.lat - a.lat);
  const double dlon = radians(b.lon - a.lon);
  const double s = std::sin(dlat / 2);
  const double t = std::sin(dlon / 2);
  const double h = s * s + std::cos(radians(a.lat)) * std::cos(radians(b.lat)) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

bool has_stable_work(const UserLabels& labels, int min_stable_days) {
  LocIndex current = kNoLocation;
  Date run_start{};
  for (const DayLabel& d : labels.days) {
    if (!d.work.detected()) continue;
    if (d.work.loc != current) {
      current = d.work.loc;
      run_start = d.date;
    }
    if ((d.date - run_start).count() + 1 >= min_stable_days) return true;
  }
  return false;
}

EmploymentResult employment_rate(std::span<const UserLabels> labels,
                                 const std::map<std::string, std::string>& region_of, int min_stable_days) {
  EmploymentResult out;
  std::map<std::string, RegionRate> by_region;
  for (const auto& [user, region] : region_of) {
    auto& r = by_region[region];
    r.region_id = region;
    ++r.users;
  }
  for (const UserLabels& u : labels) {
    auto it = region_of.find(u.user_id);
    if (it == region_of.end()) {
      ++out.users_without_region;
      continue;
    }
    if (has_stable_work(u, min_stable_days)) ++by_region[it->second].employed;
  }
  for (auto& [id, r] : by_region) {
    r.rate = r.users == 0 ? 0.0 : static_cast<double>(r.employed) / static_cast<double>(r.users);
    out.regions.push_back(r);
  }
  return out;
}

std::map<std::string, std::string> home_regions(std::span<const UserLabels> labels, const CoordinateTable& coords) {
  std::map<std::string, std::string> out;
  std::vector<std::size_t> counts;
  for (const UserLabels& u : labels) {
    counts.assign(u.locations.size(), 0);
    for (const DayLabel& d : u.days) {
      if (d.home.detected()) ++counts[d.home.loc];
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
      if (counts[i] > counts[best]) best = i;
    }
    if (counts.empty() || counts[best] == 0) continue;
    auto it = coords.find(u.locations[best]);
    if (it == coords.end() || !it->second.region_id) continue;
    out[u.user_id] = *it->second.region_id;
  }
  return out;
}

CommuteResult commute_stats(std::span<const UserLabels> labels, const CoordinateTable& coords,
                            const std::map<std::string, std::string>& group_of) {
  CommuteResult out;
  std::map<std::string, std::vector<double>> per_group;
  for (const UserLabels& u : labels) {
    auto g = group_of.find(u.user_id);
    if (g == group_of.end()) {
      ++out.users_without_group;
      continue;
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (const DayLabel& d : u.days) {
      if (!d.home.detected() || !d.work.detected()) continue;
      auto h = coords.find(std::string(u.location(d.home.loc)));
      auto w = coords.find(std::string(u.location(d.work.loc)));
      if (h == coords.end() || w == coords.end()) {
        ++out.days_missing_coords;
        continue;
      }
      sum += haversine_km(h->second, w->second);
      ++n;
    }
    if (n > 0) per_group[g->second].push_back(sum / static_cast<double>(n));
  }
  for (const auto& [group, xs] : per_group) {
    const MeanStderr m = mean_stderr(xs);
    out.groups.push_back({group, xs.size(), m.mean, m.stderr_});
  }
  return out;
}

ReferenceComparison compare_to_reference(const std::map<std::string, double>& estimates,
                                         const std::map<std::string, double>& reference) {
  std::vector<double> est, ref;
  for (const auto& [region, value] : estimates) {
    auto it = reference.find(region);
    if (it == reference.end()) continue;
    est.push_back(value);
    ref.push_back(it->second);
  }
  if (est.size() < 2) throw std::invalid_argument("need at least two regions shared with the reference");

  ReferenceComparison out;
  out.regions_compared = est.size();
  const auto n = static_cast<double>(est.size());
  double me = 0.0, mr = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    me += est[i];
    mr += ref[i];
  }
  me /= n;
  mr /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    sxy += (est[i] - me) * (ref[i] - mr);
    sxx += (est[i] - me) * (est[i] - me);
    syy += (ref[i] - mr) * (ref[i] - mr);
  }
  out.pearson_r = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : std::nan("");

  double rel = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (ref[i] == 0.0) {
      ++out.zero_reference_excluded;
      continue;
    }
    rel += std::abs(est[i] - ref[i]) / std::abs(ref[i]);
    ++counted;
  }
  out.mean_relative_error = counted == 0 ? std::nan("") : rel / static_cast<double>(counted);
  return out;
}

}  // namespace howde
