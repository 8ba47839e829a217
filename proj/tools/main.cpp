// magicmps command-line entry point.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "magicmps/io/commands.hpp"
#include "magicmps/io/config.hpp"

namespace fs = std::filesystem;
using namespace magicmps;

namespace {

constexpr const char* kOutEnv = "MAGICMPS_OUT";

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  bool desk_scale = false;
};

// --out beats the environment, which beats the config file.
fs::path resolve_out(const std::string& flag, const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return from_config;
}

ExperimentConfig load(const CommonFlags& f, int experiment) {
  ExperimentConfig c = io::load_experiment_config(f.config, experiment);
  if (f.desk_scale) apply_desk_scale(c);
  if (f.seed) c.master_seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
  c.output = resolve_out(f.out, c.output).string();
  c.validate();
  return c;
}

void report(const io::OutputBundle& bundle) {
  for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : bundle.files) std::cout << f.string() << '\n';
}

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "experiment config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory (overrides " + std::string(kOutEnv) + " and the config)");
  cmd->add_option("--seed", f.seed, "master seed (overrides the config)");
  cmd->add_option("--threads", f.threads, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  cmd->add_flag("--desk-scale", f.desk_scale, "100 trajectories, 2000 samples, N <= 20");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilizer Renyi entropy of Haar-random brick-wall circuits with matrix product states"};
  app.require_subcommand(1);

  CommonFlags exp1_flags;
  auto* exp1 = app.add_subcommand("exp1", "final-state SRE vs bond dimension");
  add_common(exp1, exp1_flags);

  CommonFlags exp2_flags;
  auto* exp2 = app.add_subcommand("exp2", "SRE and entanglement during evolution");
  add_common(exp2, exp2_flags);

  std::size_t oc_n = 6, oc_depth = 12, oc_samples = 4000;
  std::uint64_t oc_seed = 0;
  auto* oracle = app.add_subcommand("oracle-check", "compare MPS against the exact statevector");
  oracle->add_option("--N", oc_n, "qubits (2..8)");
  oracle->add_option("--depth", oc_depth, "brick-wall layers");
  oracle->add_option("--seed", oc_seed, "master seed");
  oracle->add_option("--samples", oc_samples, "Pauli samples")->check(CLI::Range(2, 100000000));

  io::SampleRequest sreq;
  std::string sample_out, sample_chi = "inf";
  auto* sample = app.add_subcommand("sample", "dump Pauli samples of one circuit output state");
  sample->add_option("--N", sreq.n_sites, "qubits");
  sample->add_option("--depth", sreq.depth, "brick-wall layers");
  sample->add_option("--chi", sample_chi, "bond cap or 'inf'");
  sample->add_option("--seed", sreq.seed, "master seed");
  sample->add_option("--trajectory", sreq.trajectory, "trajectory index");
  sample->add_option("--samples", sreq.n_samples, "number of samples");
  sample->add_option("--out", sample_out, "output directory");

  std::string fit_dir;
  double fit_eps = 0.1;
  auto* fit = app.add_subcommand("fit", "refit deviations and saturation times from existing CSVs");
  fit->add_option("bundle", fit_dir, "bundle directory")->required();
  fit->add_option("--epsilon", fit_eps, "saturation band")->check(CLI::PositiveNumber);

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "render SVG figures from a bundle");
  plot->add_option("bundle", plot_dir, "bundle directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*exp1 || *exp2) {
      const bool first = exp1->parsed();
      const ExperimentConfig c = load(first ? exp1_flags : exp2_flags, first ? 1 : 2);
      const RunOptions options{c.threads, TrajectoryOrder::forward};
      report(first ? io::cmd_exp1(c, c.output, options) : io::cmd_exp2(c, c.output, options));
    } else if (*oracle) {
      const auto r = io::cmd_oracle_check(oc_n, oc_depth, oc_seed, oc_samples);
      std::cout << r.to_text();
      return r.passed() ? 0 : 1;
    } else if (*sample) {
      if (sample_chi == "inf") {
        sreq.chi = kInfiniteChi;
      } else {
        sreq.chi = std::stoul(sample_chi);
        if (sreq.chi == 0) throw std::invalid_argument("--chi must be positive or 'inf'");
      }
      report(io::cmd_sample(sreq, resolve_out(sample_out, "out")));
    } else if (*fit) {
      report(io::cmd_fit(fit_dir, fit_eps));
    } else if (*plot) {
      report(io::cmd_plot(plot_dir));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
