#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "magicmps/mps.hpp"

namespace magicmps {

/// chi value that selects the infinite (uncapped) mode.
inline constexpr std::size_t kInfiniteChi = 0;

struct ExperimentConfig {
  int experiment = 1;
  std::vector<std::size_t> n_list;
  std::vector<std::size_t> chi_list;             ///< experiment 1; kInfiniteChi allowed
  std::map<std::size_t, std::size_t> chi_sre_map;  ///< experiment 2: N -> cap
  std::optional<std::size_t> reference_chi;        ///< experiment 2: extra run per N at this cap
  std::size_t depth = 40;
  std::size_t n_trajectories = 500;
  std::optional<std::size_t> n_samples;  ///< default: 10^4 for N <= 20, else 3000
  std::uint64_t master_seed = 0;
  std::string output = "out";
  std::size_t threads = 1;
  double svd_tol = 1e-8;
  std::size_t max_chi = 1024;  ///< hard cap guarding memory
  double saturation_epsilon = 0.1;  ///< absolute band for saturation times (nats for SRE, bits for S)

  std::size_t samples_for(std::size_t n_sites) const;
  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Defaults for experiment `experiment` (depth 40 for 1, 20 for 2).
ExperimentConfig default_config(int experiment);

/// Desk-scale overrides: 100 trajectories, 2000 samples, N <= 20.
void apply_desk_scale(ExperimentConfig& config);

enum class TrajectoryOrder { forward, reverse };

struct RunOptions {
  std::size_t threads = 1;
  TrajectoryOrder order = TrajectoryOrder::forward;
};

/// Per-trajectory measurement of one state.
struct TrajectoryPoint {
  double m1 = 0.0;
  double m2 = 0.0;
  double se1 = 0.0;
  double se2 = 0.0;
  double s_max = 0.0;  ///< max-over-cuts entanglement entropy, bits
  std::size_t max_bond = 1;
  std::size_t required_bond = 1;  ///< largest tolerance-only bond requested by the last layer
  std::size_t redraws = 0;
};

/// Quenched average over trajectories (means of per-trajectory estimates).
struct AveragedPoint {
  std::size_t n_sites = 0;
  std::size_t chi = kInfiniteChi;
  std::optional<std::size_t> t;  ///< set for time series
  double m1_bar = 0.0;
  double sem1 = 0.0;
  double m2_bar = 0.0;
  double sem2 = 0.0;
  double s_bar = 0.0;
  double sem_s = 0.0;
  double max_bond_mean = 0.0;
  double required_bond_mean = 0.0;
  double est_se1 = 0.0;  ///< rms of per-trajectory estimator errors / sqrt(n_traj)
  double est_se2 = 0.0;
  std::size_t n_traj = 0;
  std::size_t redraws = 0;
};

/// Brick-wall circuit of `depth` layers from |0...0>, then a measurement of the final state.
TrajectoryPoint final_state_trajectory(std::size_t n_sites, const TruncationPolicy& policy, std::size_t depth,
                                       std::size_t n_samples, std::uint64_t master_seed, std::uint64_t trajectory);

/// Measurements after every layer, t = 0..depth (t = 0 is the initial state).
std::vector<TrajectoryPoint> time_series_trajectory(std::size_t n_sites, const TruncationPolicy& policy,
                                                    std::size_t depth, std::size_t n_samples,
                                                    std::uint64_t master_seed, std::uint64_t trajectory);

/// Mean and standard error over trajectories, reduced in trajectory order.
AveragedPoint aggregate(std::size_t n_sites, std::size_t chi, std::optional<std::size_t> t,
                        const std::vector<TrajectoryPoint>& trajectories);

/// Runs body(i) for i in [0, count) on `threads` workers. The first exception
/// is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, TrajectoryOrder order,
                  const std::function<void(std::size_t)>& body);

/// Rows ordered by n_list, then chi_list.
std::vector<AveragedPoint> run_experiment1(const ExperimentConfig& config, const RunOptions& options = {});

/// Rows ordered by n_list, then cap (chi_sre_map[N], then reference_chi if set), then t = 0..depth.
std::vector<AveragedPoint> run_experiment2(const ExperimentConfig& config, const RunOptions& options = {});

TruncationPolicy policy_for(std::size_t chi, double svd_tol);

}  // namespace magicmps
