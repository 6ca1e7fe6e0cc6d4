#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace wrom::harness {

/// Velocity H1-seminorm error statistics over the test set at one size N.
/// Relative errors are per-sample ratios e_i / |u_i| averaged or maximized;
/// relative_ratio_of_means is mean(e_i) / mean(|u_i|).
struct ErrorRow {
  int n = 0;
  double absolute = 0.0;
  double absolute_max = 0.0;
  double relative = 0.0;
  double relative_max = 0.0;
  double relative_ratio_of_means = 0.0;
  int failures = 0;  // test samples excluded from this row
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  /// Config echo, seeds, mesh hash, cardinalities and wall times. Written to
  /// a sidecar file so the CSV itself stays byte-reproducible.
  nlohmann::json metadata = nlohmann::json::object();
};

/// Header plus one row per N; floating values at 17 significant digits.
void write_csv(std::ostream& out, const ErrorTable& table);
/// Inverse of write_csv (metadata is not part of the CSV).
ErrorTable read_csv(std::istream& in);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line chart with a logarithmic y axis. Non-positive or non-finite values
/// break the polyline.
void write_svg(std::ostream& out, const std::vector<Series>& series, const std::string& caption);

/// The four error curves of a table, labels optionally prefixed.
std::vector<Series> table_series(const ErrorTable& table, const std::string& prefix = "");

/// Writes <stem>.csv, <stem>.svg and <stem>.json into dir. Throws
/// std::runtime_error when a file cannot be written.
void emit(const std::filesystem::path& dir, const std::string& stem, const ErrorTable& table,
          const std::string& caption);

}  // namespace wrom::harness
