#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "magicmps/analysis.hpp"
#include "magicmps/experiment.hpp"
#include "magicmps/io/csv.hpp"
#include "magicmps/magic.hpp"

namespace magicmps::io {

/// Files written by one command into one output directory.
struct OutputBundle {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Experiment 1: averages.csv, deviations.csv (vs chi), fits.csv (alpha per N and n, lambda per n),
/// metadata.json.
OutputBundle cmd_exp1(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                      const RunOptions& options = {});

/// Experiment 2: timeseries.csv, deviations.csv (vs t), fits.csv (gamma), saturation.csv,
/// comparison.csv when reference_chi is set, metadata.json.
OutputBundle cmd_exp2(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                      const RunOptions& options = {});

struct OracleReport {
  std::size_t n_sites = 0;
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  double m1_exact = 0.0;
  double m2_exact = 0.0;
  SreEstimate sampled;
  double max_entropy_diff = 0.0;
  double m2_haar = 0.0;

  bool fidelity_ok() const { return fidelity >= 1.0 - 1e-8; }
  bool m1_ok() const;
  bool m2_ok() const;
  bool entropy_ok() const { return max_entropy_diff <= 1e-8; }
  bool passed() const { return fidelity_ok() && m1_ok() && m2_ok() && entropy_ok(); }
  std::string to_text() const;
};

/// MPS (infinite mode) against the statevector oracle on the same gate stream (trajectory 0).
OracleReport cmd_oracle_check(std::size_t n_sites, std::size_t depth, std::uint64_t seed,
                              std::size_t n_samples = 4000);

struct SampleRequest {
  std::size_t n_sites = 8;
  std::size_t depth = 20;
  std::size_t chi = kInfiniteChi;
  std::uint64_t seed = 0;
  std::uint64_t trajectory = 0;
  std::size_t n_samples = 1000;
};

/// Dumps SampleRecords of one circuit output state to samples.csv.
OutputBundle cmd_sample(const SampleRequest& request, const std::filesystem::path& out_dir);

/// Recomputes deviations.csv and fits.csv (and saturation.csv for time series)
/// from an existing averages.csv or timeseries.csv.
OutputBundle cmd_fit(const std::filesystem::path& bundle_dir, double saturation_epsilon = 0.1);

/// Writes SVG figures for whatever CSVs the bundle holds.
OutputBundle cmd_plot(const std::filesystem::path& bundle_dir);

/// Saturation times of m1, m2 and s per (N, cap) of a time-series table.
std::vector<SaturationRow> saturation_rows(std::span<const AveragedPoint> series, double epsilon);

/// Pairs each capped curve with the reference-cap curve of the same N.
std::vector<ComparisonRow> comparison_rows(std::span<const AveragedPoint> series, std::size_t reference_chi);

}  // namespace magicmps::io
