#include "magicmps/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "magicmps/haar.hpp"
#include "magicmps/magic.hpp"

namespace magicmps {

namespace {

struct TrajectoryStats {
  double mean = 0.0;
  double sem = 0.0;
};

TrajectoryStats mean_and_sem(std::vector<double> values) {
  TrajectoryStats out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  out.mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  if (n < 2) return out;
  for (auto& v : values) v = (v - out.mean) * (v - out.mean);
  const double var = pairwise_sum(values.data(), n) / static_cast<double>(n - 1);
  out.sem = std::sqrt(var / static_cast<double>(n));
  return out;
}

double rms_over_sqrt_n(std::vector<double> values) {
  if (values.empty()) return 0.0;
  for (auto& v : values) v *= v;
  const double n = static_cast<double>(values.size());
  return std::sqrt(pairwise_sum(values.data(), values.size()) / n) / std::sqrt(n);
}

TrajectoryPoint measure(const MpsState& state, std::size_t n_samples, std::uint64_t master_seed,
                        std::uint64_t trajectory, std::size_t t, std::size_t required_bond) {
  MpsState gauged = state;
  gauged.move_center(0);
  auto rng = derive_stream(SeedTree{master_seed, trajectory, t, StreamKind::sampling});
  const SreEstimate est = estimate_sre(gauged, n_samples, rng);
  TrajectoryPoint p;
  p.m1 = est.m1;
  p.m2 = est.m2;
  p.se1 = est.se1;
  p.se2 = est.se2;
  p.redraws = est.n_redrawn;
  p.s_max = entanglement_profile(gauged).max_cut_value;
  p.max_bond = max_required_bond(gauged);
  p.required_bond = required_bond;
  return p;
}

// Applies one layer and returns the largest tolerance-only bond it requested.
std::size_t apply_layer(MpsState& state, const BrickworkSchedule& schedule, std::size_t layer,
                        std::uint64_t master_seed, std::uint64_t trajectory) {
  std::size_t slot = first_slot_of_layer(schedule, layer);
  std::size_t required = 1;
  for (std::size_t left : schedule.layers[layer]) {
    const auto report = state.apply_two_qubit_gate(haar_gate(master_seed, trajectory, slot++), left);
    required = std::max(required, report.required_bond);
  }
  return required;
}

void check_feasible(const ExperimentConfig& config, std::size_t n_sites, std::size_t chi) {
  if (chi == kInfiniteChi) {
    // Exact bonds reach 2^floor(N/2).
    const std::size_t half = n_sites / 2;
    if (half >= 63 || (std::size_t{1} << half) > config.max_chi) {
      throw std::invalid_argument("infinite mode at N=" + std::to_string(n_sites) + " exceeds the hard cap max_chi=" +
                                  std::to_string(config.max_chi));
    }
  } else if (chi > config.max_chi) {
    throw std::invalid_argument("chi=" + std::to_string(chi) + " exceeds the hard cap max_chi=" +
                                std::to_string(config.max_chi));
  }
}

}  // namespace

std::size_t ExperimentConfig::samples_for(std::size_t n_sites) const {
  if (n_samples) return *n_samples;
  return n_sites <= 20 ? 10000 : 3000;
}

void ExperimentConfig::validate() const {
  if (experiment != 1 && experiment != 2) throw std::invalid_argument("experiment must be 1 or 2");
  if (n_list.empty()) throw std::invalid_argument("N_list must not be empty");
  for (auto n : n_list) {
    if (n < 2) throw std::invalid_argument("every N must be at least 2");
  }
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (n_trajectories < 1) throw std::invalid_argument("n_trajectories must be positive");
  if (n_samples && *n_samples < 2) throw std::invalid_argument("n_samples must be at least 2");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  if (!(svd_tol >= 0.0)) throw std::invalid_argument("svd_tol must be nonnegative");
  if (max_chi < 1) throw std::invalid_argument("max_chi must be positive");
  if (!(saturation_epsilon > 0.0)) throw std::invalid_argument("saturation_epsilon must be positive");
  if (experiment == 1) {
    if (chi_list.empty()) throw std::invalid_argument("chi_list must not be empty for experiment 1");
  } else {
    for (auto n : n_list) {
      const auto it = chi_sre_map.find(n);
      if (it == chi_sre_map.end()) {
        throw std::invalid_argument("chi_sre_map has no entry for N=" + std::to_string(n));
      }
      if (it->second == 0) throw std::invalid_argument("chi_sre_map entries must be positive");
    }
    if (reference_chi && *reference_chi == 0) throw std::invalid_argument("reference_chi must be positive");
  }
}

ExperimentConfig default_config(int experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.depth = experiment == 2 ? 20 : 40;
  return c;
}

void apply_desk_scale(ExperimentConfig& config) {
  config.n_trajectories = 100;
  config.n_samples = 2000;
  std::erase_if(config.n_list, [](std::size_t n) { return n > 20; });
}

TruncationPolicy policy_for(std::size_t chi, double svd_tol) {
  if (chi == kInfiniteChi) return TruncationPolicy::infinite(svd_tol);
  return TruncationPolicy::finite(chi, svd_tol);
}

TrajectoryPoint final_state_trajectory(std::size_t n_sites, const TruncationPolicy& policy, std::size_t depth,
                                       std::size_t n_samples, std::uint64_t master_seed, std::uint64_t trajectory) {
  const auto schedule = brickwork(n_sites, depth);
  MpsState state = MpsState::zeros(n_sites, policy);
  std::size_t required = 1;
  for (std::size_t layer = 0; layer < depth; ++layer) {
    required = apply_layer(state, schedule, layer, master_seed, trajectory);
  }
  return measure(state, n_samples, master_seed, trajectory, depth, required);
}

std::vector<TrajectoryPoint> time_series_trajectory(std::size_t n_sites, const TruncationPolicy& policy,
                                                    std::size_t depth, std::size_t n_samples,
                                                    std::uint64_t master_seed, std::uint64_t trajectory) {
  const auto schedule = brickwork(n_sites, depth);
  MpsState state = MpsState::zeros(n_sites, policy);
  std::vector<TrajectoryPoint> out;
  out.reserve(depth + 1);
  out.push_back(measure(state, n_samples, master_seed, trajectory, 0, 1));
  for (std::size_t layer = 0; layer < depth; ++layer) {
    const std::size_t required = apply_layer(state, schedule, layer, master_seed, trajectory);
    out.push_back(measure(state, n_samples, master_seed, trajectory, layer + 1, required));
  }
  return out;
}

AveragedPoint aggregate(std::size_t n_sites, std::size_t chi, std::optional<std::size_t> t,
                        const std::vector<TrajectoryPoint>& trajectories) {
  const std::size_t n = trajectories.size();
  std::vector<double> m1(n), m2(n), s(n), bond(n), req(n), se1(n), se2(n);
  AveragedPoint p;
  p.n_sites = n_sites;
  p.chi = chi;
  p.t = t;
  p.n_traj = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tr = trajectories[i];
    m1[i] = tr.m1;
    m2[i] = tr.m2;
    s[i] = tr.s_max;
    bond[i] = static_cast<double>(tr.max_bond);
    req[i] = static_cast<double>(tr.required_bond);
    se1[i] = tr.se1;
    se2[i] = tr.se2;
    p.redraws += tr.redraws;
  }
  const auto a1 = mean_and_sem(m1);
  const auto a2 = mean_and_sem(m2);
  const auto as = mean_and_sem(s);
  p.m1_bar = a1.mean;
  p.sem1 = a1.sem;
  p.m2_bar = a2.mean;
  p.sem2 = a2.sem;
  p.s_bar = as.mean;
  p.sem_s = as.sem;
  p.max_bond_mean = mean_and_sem(bond).mean;
  p.required_bond_mean = mean_and_sem(req).mean;
  p.est_se1 = rms_over_sqrt_n(se1);
  p.est_se2 = rms_over_sqrt_n(se2);
  return p;
}

void parallel_for(std::size_t count, std::size_t threads, TrajectoryOrder order,
                  const std::function<void(std::size_t)>& body) {
  auto index_of = [&](std::size_t k) { return order == TrajectoryOrder::forward ? k : count - 1 - k; };
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        body(index_of(k));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

std::vector<AveragedPoint> run_experiment1(const ExperimentConfig& config, const RunOptions& options) {
  if (config.experiment != 1) throw std::invalid_argument("run_experiment1 needs an experiment 1 config");
  config.validate();
  for (auto n : config.n_list) {
    for (auto chi : config.chi_list) check_feasible(config, n, chi);
  }

  struct Cell {
    std::size_t n_sites;
    std::size_t chi;
  };
  std::vector<Cell> cells;
  for (auto n : config.n_list) {
    for (auto chi : config.chi_list) cells.push_back({n, chi});
  }
  const std::size_t n_traj = config.n_trajectories;
  std::vector<TrajectoryPoint> results(cells.size() * n_traj);
  parallel_for(results.size(), options.threads, options.order, [&](std::size_t unit) {
    const Cell& cell = cells[unit / n_traj];
    const std::size_t traj = unit % n_traj;
    results[unit] = final_state_trajectory(cell.n_sites, policy_for(cell.chi, config.svd_tol), config.depth,
                                           config.samples_for(cell.n_sites), config.master_seed, traj);
  });

  std::vector<AveragedPoint> table;
  table.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::vector<TrajectoryPoint> slice(results.begin() + static_cast<std::ptrdiff_t>(c * n_traj),
                                             results.begin() + static_cast<std::ptrdiff_t>((c + 1) * n_traj));
    table.push_back(aggregate(cells[c].n_sites, cells[c].chi, std::nullopt, slice));
  }
  return table;
}

std::vector<AveragedPoint> run_experiment2(const ExperimentConfig& config, const RunOptions& options) {
  if (config.experiment != 2) throw std::invalid_argument("run_experiment2 needs an experiment 2 config");
  config.validate();

  struct Cell {
    std::size_t n_sites;
    std::size_t chi;
  };
  std::vector<Cell> cells;
  for (auto n : config.n_list) {
    cells.push_back({n, config.chi_sre_map.at(n)});
    if (config.reference_chi && *config.reference_chi != config.chi_sre_map.at(n)) {
      cells.push_back({n, *config.reference_chi});
    }
  }
  for (const auto& cell : cells) check_feasible(config, cell.n_sites, cell.chi);

  const std::size_t n_traj = config.n_trajectories;
  std::vector<std::vector<TrajectoryPoint>> results(cells.size() * n_traj);
  parallel_for(results.size(), options.threads, options.order, [&](std::size_t unit) {
    const Cell& cell = cells[unit / n_traj];
    const std::size_t traj = unit % n_traj;
    results[unit] = time_series_trajectory(cell.n_sites, policy_for(cell.chi, config.svd_tol), config.depth,
                                           config.samples_for(cell.n_sites), config.master_seed, traj);
  });

  std::vector<AveragedPoint> table;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t t = 0; t <= config.depth; ++t) {
      std::vector<TrajectoryPoint> slice;
      slice.reserve(n_traj);
      for (std::size_t traj = 0; traj < n_traj; ++traj) slice.push_back(results[c * n_traj + traj][t]);
      table.push_back(aggregate(cells[c].n_sites, cells[c].chi, t, slice));
    }
  }
  return table;
}

}  // namespace magicmps
