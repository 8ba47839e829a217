#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magicmps/analysis.hpp"
#include "magicmps/experiment.hpp"
#include "magicmps/magic.hpp"

namespace magicmps::io {

/// Plain comma-separated table. The first line of a file is a "# schema: <name>/v<k>"
/// comment, the second the header row.
struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  ///< throws std::invalid_argument if missing
  bool has_column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
  bool empty() const { return rows.empty(); }

  /// Header plus rows, without the schema line.
  std::string body() const;
};

/// Nine significant digits.
std::string format_number(double value);
/// Round-trip precision (17 significant digits).
std::string format_exact(double value);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Rows of averages.csv / timeseries.csv are traceable to (master_seed, trajectories first..last).
CsvTable averages_table(std::span<const AveragedPoint> points, std::uint64_t master_seed, bool time_series);
std::vector<AveragedPoint> averages_from_table(const CsvTable& table);

CsvTable deviations_table(std::span<const DeviationPoint> points, SweepAxis axis);
CsvTable fits_table(std::span<const FitRow> rows);

struct SaturationRow {
  std::size_t n_sites = 0;
  std::size_t chi = 0;
  std::string quantity;  ///< m1, m2 or s
  double target = 0.0;
  double epsilon = 0.0;
  std::optional<double> t_sat;
};
CsvTable saturation_table(std::span<const SaturationRow> rows);

/// Capped vs reference curves of one N over t.
struct ComparisonRow {
  std::size_t n_sites = 0;
  std::size_t t = 0;
  std::size_t chi_cap = 0;
  std::size_t chi_ref = 0;
  double m2_cap = 0.0;
  double m2_ref = 0.0;
  double combined_se_m2 = 0.0;
  double s_cap = 0.0;
  double s_ref = 0.0;
  double combined_se_s = 0.0;
};
CsvTable comparison_table(std::span<const ComparisonRow> rows);

struct SampleDumpRow {
  std::uint64_t trajectory = 0;
  std::size_t sample_index = 0;
  SampleRecord record;
};
CsvTable samples_table(std::span<const SampleDumpRow> rows);

}  // namespace magicmps::io
