#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "howde/apps.hpp"
#include "howde/metrics.hpp"
#include "howde/model.hpp"

namespace howde {

// ---- stops: user_id,loc_id,start,end[,utc_offset_minutes] -----------------
//
// Timestamps are epoch seconds or ISO-8601 local times. Epoch seconds and ISO
// values with a 'Z' suffix are UTC and are shifted by utc_offset_minutes.

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct ReadOptions {
  // Skip malformed rows (recording them) instead of failing on the first one.
  // Overlapping stops always fail.
  bool skip_bad_rows = false;
};

struct StopTable {
  std::vector<UserTrace> traces;  // ascending user_id
  std::vector<RejectedRow> rejected;
  std::size_t rows = 0;
};

StopTable read_stops(std::istream& in, const ReadOptions& opts = {});
StopTable read_stops_file(const std::string& path, const ReadOptions& opts = {});

enum class TimeFormat { kIso, kEpoch };

void write_stops(std::ostream& out, std::span<const UserTrace> traces, TimeFormat format = TimeFormat::kIso);
void write_stops_file(const std::string& path, std::span<const UserTrace> traces, TimeFormat format = TimeFormat::kIso);

// ---- labels: user_id,date,home_loc,home_status,work_loc,work_status --------

void write_labels(std::ostream& out, std::span<const UserLabels> labels);
void write_labels_file(const std::string& path, std::span<const UserLabels> labels);
std::vector<UserLabels> read_labels(std::istream& in);
std::vector<UserLabels> read_labels_file(const std::string& path);

// ---- ground truth: user_id,scope,week,loc_id ------------------------------
//
// `week` is an ISO week ("2019-W05") for user-week truth or empty for
// user-level truth. Rows sharing (user, week) form one truth set.

GroundTruth read_truth(std::istream& in, Scope scope);
GroundTruth read_truth_file(const std::string& path, Scope scope);
void write_truth(std::ostream& out, std::span<const GroundTruth> truths);
void write_truth_file(const std::string& path, std::span<const GroundTruth> truths);

// ---- coordinates: loc_id,lat,lon[,region_id] --------------------------------

CoordinateTable read_coords(std::istream& in);
CoordinateTable read_coords_file(const std::string& path);
void write_coords(std::ostream& out, const CoordinateTable& coords);
void write_coords_file(const std::string& path, const CoordinateTable& coords);

// Two-column CSV with a header (user_id,region_id / user_id,group / ...).
std::map<std::string, std::string> read_mapping_file(const std::string& path);
// region_id,value
std::map<std::string, double> read_reference_file(const std::string& path);

// Fixed-point rendering used by every CSV writer; NaN prints as "nan".
std::string format_fixed(double x, int digits = 6);

std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace howde
