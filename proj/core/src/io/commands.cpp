#include "magicmps/io/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "magicmps/haar.hpp"
#include "magicmps/io/config.hpp"
#include "magicmps/io/svg.hpp"
#include "magicmps/oracle.hpp"

namespace magicmps::io {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "0.1.0";

json config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["N_list"] = c.n_list;
  if (c.experiment == 1) {
    j["chi_list"] = c.chi_list;
  } else {
    json m = json::object();
    for (const auto& [n, chi] : c.chi_sre_map) m[std::to_string(n)] = chi;
    j["chi_sre_map"] = m;
    j["reference_chi"] = c.reference_chi ? json(*c.reference_chi) : json(nullptr);
  }
  j["depth"] = c.depth;
  j["n_trajectories"] = c.n_trajectories;
  j["n_samples"] = c.n_samples ? json(*c.n_samples) : json(nullptr);
  j["master_seed"] = c.master_seed;
  j["output"] = c.output;
  j["threads"] = c.threads;
  j["svd_tol"] = c.svd_tol;
  j["max_chi"] = c.max_chi;
  j["saturation_epsilon"] = c.saturation_epsilon;
  return j;
}

void write_metadata(const fs::path& path, const std::string& command, const ExperimentConfig& config,
                    const RunOptions& options, double wall_seconds, std::size_t redraws,
                    const std::vector<std::string>& schemas) {
  json j;
  j["tool"] = "magicmps";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config_json(config);
  j["config_text"] = to_config_text(config);
  j["rng"] = std::string(kRngIdentifier);
  j["master_seed"] = config.master_seed;
  j["threads"] = options.threads;
  j["wall_seconds"] = wall_seconds;
  j["redraws_total"] = redraws;
  j["csv_schemas"] = schemas;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::size_t total_redraws(std::span<const AveragedPoint> table) {
  std::size_t r = 0;
  for (const auto& p : table) r += p.redraws;
  return r;
}

void emit(OutputBundle& bundle, const fs::path& path, const CsvTable& table) {
  write_csv(path, table);
  bundle.files.push_back(path);
}

std::vector<DeviationPoint> deviations_or_warn(std::span<const AveragedPoint> table, SweepAxis axis,
                                               OutputBundle& bundle) {
  try {
    return compute_deviations(table, axis);
  } catch (const std::invalid_argument& e) {
    bundle.warnings.emplace_back(e.what());
    return {};
  }
}

void write_svg(OutputBundle& bundle, const fs::path& path, const PlotSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << render_svg(spec);
  bundle.files.push_back(path);
}

std::optional<CsvTable> read_if_present(const fs::path& path, OutputBundle& bundle) {
  if (!fs::exists(path)) return std::nullopt;
  CsvTable t = read_csv(path);
  if (t.empty()) {
    bundle.warnings.push_back(path.filename().string() + " has no data rows; no plot written");
    return std::nullopt;
  }
  return t;
}

std::string label_n(std::size_t n, std::size_t chi, bool with_chi) {
  std::string s = "N=" + std::to_string(n);
  if (with_chi) s += chi == kInfiniteChi ? " chi=inf" : " chi=" + std::to_string(chi);
  return s;
}

}  // namespace

OutputBundle cmd_exp1(const ExperimentConfig& config, const fs::path& out_dir, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  OutputBundle bundle;
  bundle.dir = out_dir;
  fs::create_directories(out_dir);

  const auto table = run_experiment1(config, options);
  const auto deviations = deviations_or_warn(table, SweepAxis::chi, bundle);
  const auto fits = fit_deviation_curves(deviations, SweepAxis::chi);

  emit(bundle, out_dir / "averages.csv", averages_table(table, config.master_seed, false));
  emit(bundle, out_dir / "deviations.csv", deviations_table(deviations, SweepAxis::chi));
  emit(bundle, out_dir / "fits.csv", fits_table(fits));
  write_metadata(out_dir / "metadata.json", "exp1", config, options, elapsed_seconds(start), total_redraws(table),
                 {"averages/v1", "deviations/v1", "fits/v1"});
  bundle.files.push_back(out_dir / "metadata.json");
  return bundle;
}

std::vector<SaturationRow> saturation_rows(std::span<const AveragedPoint> series, double epsilon) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<const AveragedPoint*>> curves;
  for (const auto& p : series) curves[{p.n_sites, p.chi}].push_back(&p);

  std::vector<SaturationRow> rows;
  for (const auto& [key, curve] : curves) {
    std::vector<SeriesPoint> m1, m2, s;
    double m1_max = 0.0;
    const AveragedPoint* last = curve.front();
    for (const auto* p : curve) {
      const double t = static_cast<double>(p->t.value_or(0));
      m1.push_back({t, p->m1_bar});
      m2.push_back({t, p->m2_bar});
      s.push_back({t, p->s_bar});
      m1_max = std::max(m1_max, p->m1_bar);
      if (p->t.value_or(0) >= last->t.value_or(0)) last = p;
    }
    const double m2_target = m2_haar(key.first);
    rows.push_back({key.first, key.second, "m1", m1_max, epsilon, saturation_time(m1, m1_max, epsilon)});
    rows.push_back({key.first, key.second, "m2", m2_target, epsilon, saturation_time(m2, m2_target, epsilon)});
    rows.push_back({key.first, key.second, "s", last->s_bar, epsilon, saturation_time(s, last->s_bar, epsilon)});
  }
  return rows;
}

std::vector<ComparisonRow> comparison_rows(std::span<const AveragedPoint> series, std::size_t reference_chi) {
  std::map<std::pair<std::size_t, std::size_t>, const AveragedPoint*> reference;
  for (const auto& p : series) {
    if (p.chi == reference_chi) reference[{p.n_sites, p.t.value_or(0)}] = &p;
  }
  std::vector<ComparisonRow> rows;
  for (const auto& p : series) {
    if (p.chi == reference_chi) continue;
    const auto it = reference.find({p.n_sites, p.t.value_or(0)});
    if (it == reference.end()) continue;
    const AveragedPoint& r = *it->second;
    ComparisonRow row;
    row.n_sites = p.n_sites;
    row.t = p.t.value_or(0);
    row.chi_cap = p.chi;
    row.chi_ref = r.chi;
    row.m2_cap = p.m2_bar;
    row.m2_ref = r.m2_bar;
    row.combined_se_m2 = std::sqrt(p.sem2 * p.sem2 + r.sem2 * r.sem2 + p.est_se2 * p.est_se2 + r.est_se2 * r.est_se2);
    row.s_cap = p.s_bar;
    row.s_ref = r.s_bar;
    row.combined_se_s = std::sqrt(p.sem_s * p.sem_s + r.sem_s * r.sem_s);
    rows.push_back(row);
  }
  return rows;
}

OutputBundle cmd_exp2(const ExperimentConfig& config, const fs::path& out_dir, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  OutputBundle bundle;
  bundle.dir = out_dir;
  fs::create_directories(out_dir);

  const auto series = run_experiment2(config, options);
  const auto deviations = deviations_or_warn(series, SweepAxis::time, bundle);
  const auto fits = fit_deviation_curves(deviations, SweepAxis::time);
  const auto saturation = saturation_rows(series, config.saturation_epsilon);

  std::vector<std::string> schemas = {"timeseries/v1", "deviations/v1", "fits/v1", "saturation/v1"};
  emit(bundle, out_dir / "timeseries.csv", averages_table(series, config.master_seed, true));
  emit(bundle, out_dir / "deviations.csv", deviations_table(deviations, SweepAxis::time));
  emit(bundle, out_dir / "fits.csv", fits_table(fits));
  emit(bundle, out_dir / "saturation.csv", saturation_table(saturation));
  if (config.reference_chi) {
    emit(bundle, out_dir / "comparison.csv", comparison_table(comparison_rows(series, *config.reference_chi)));
    schemas.emplace_back("comparison/v1");
  }
  write_metadata(out_dir / "metadata.json", "exp2", config, options, elapsed_seconds(start), total_redraws(series),
                 schemas);
  bundle.files.push_back(out_dir / "metadata.json");
  return bundle;
}

bool OracleReport::m1_ok() const {
  if (sampled.se1 == 0.0) return std::abs(m1_exact - sampled.m1) <= 1e-10;
  return std::abs(m1_exact - sampled.m1) <= 3.0 * sampled.se1;
}

bool OracleReport::m2_ok() const {
  if (sampled.se2 == 0.0) return std::abs(m2_exact - sampled.m2) <= 1e-10;
  return std::abs(m2_exact - sampled.m2) <= 3.0 * sampled.se2;
}

std::string OracleReport::to_text() const {
  std::ostringstream out;
  auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  out << "oracle-check N=" << n_sites << " depth=" << depth << " seed=" << seed << '\n';
  out << "  fidelity            " << format_exact(fidelity) << "  " << verdict(fidelity_ok()) << '\n';
  out << "  M1 exact / sampled  " << format_number(m1_exact) << " / " << format_number(sampled.m1)
      << " (se " << format_number(sampled.se1) << ")  " << verdict(m1_ok()) << '\n';
  out << "  M2 exact / sampled  " << format_number(m2_exact) << " / " << format_number(sampled.m2)
      << " (se " << format_number(sampled.se2) << ")  " << verdict(m2_ok()) << '\n';
  out << "  max entropy diff    " << format_number(max_entropy_diff) << "  " << verdict(entropy_ok()) << '\n';
  out << "  M2 Haar reference   " << format_number(m2_haar) << '\n';
  out << (passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

OracleReport cmd_oracle_check(std::size_t n_sites, std::size_t depth, std::uint64_t seed, std::size_t n_samples) {
  if (n_sites < 2 || n_sites > kMaxExactSreSites) throw std::invalid_argument("oracle-check needs 2 <= N <= 8");
  const auto schedule = brickwork(n_sites, depth);
  const auto gates = circuit_gates(schedule, seed, 0);

  MpsState mps = MpsState::zeros(n_sites, TruncationPolicy::infinite());
  std::size_t slot = 0;
  for (const auto& layer : schedule.layers) {
    for (std::size_t left : layer) mps.apply_two_qubit_gate(gates[slot++], left);
  }
  const Statevector exact = evolve_exact(n_sites, schedule, gates);

  OracleReport report;
  report.n_sites = n_sites;
  report.depth = depth;
  report.seed = seed;
  report.fidelity = fidelity(to_statevector(mps), exact.amplitudes());
  report.m1_exact = exact_sre(exact, 1);
  report.m2_exact = exact_sre(exact, 2);
  auto rng = derive_stream(SeedTree{seed, 0, depth, StreamKind::sampling});
  report.sampled = estimate_sre(mps, n_samples, rng);
  const auto profile = entanglement_profile(mps);
  for (std::size_t cut = 1; cut < n_sites; ++cut) {
    report.max_entropy_diff =
        std::max(report.max_entropy_diff, std::abs(profile.per_cut[cut - 1] - exact_entropy(exact, cut)));
  }
  report.m2_haar = m2_haar(n_sites);
  return report;
}

OutputBundle cmd_sample(const SampleRequest& request, const fs::path& out_dir) {
  OutputBundle bundle;
  bundle.dir = out_dir;
  fs::create_directories(out_dir);
  const auto schedule = brickwork(request.n_sites, request.depth);
  MpsState state = MpsState::zeros(request.n_sites, policy_for(request.chi, 1e-8));
  std::size_t slot = 0;
  for (const auto& layer : schedule.layers) {
    for (std::size_t left : layer) {
      state.apply_two_qubit_gate(haar_gate(request.seed, request.trajectory, slot++), left);
    }
  }
  state.move_center(0);
  const PauliSampler sampler(state);
  auto rng = derive_stream(SeedTree{request.seed, request.trajectory, request.depth, StreamKind::sampling});
  std::vector<SampleDumpRow> rows;
  rows.reserve(request.n_samples);
  for (std::size_t i = 0; i < request.n_samples; ++i) rows.push_back({request.trajectory, i, sampler.draw(rng)});
  emit(bundle, out_dir / "samples.csv", samples_table(rows));
  return bundle;
}

OutputBundle cmd_fit(const fs::path& bundle_dir, double saturation_epsilon) {
  OutputBundle bundle;
  bundle.dir = bundle_dir;
  if (fs::exists(bundle_dir / "averages.csv")) {
    const auto table = averages_from_table(read_csv(bundle_dir / "averages.csv"));
    const auto deviations = deviations_or_warn(table, SweepAxis::chi, bundle);
    emit(bundle, bundle_dir / "deviations.csv", deviations_table(deviations, SweepAxis::chi));
    emit(bundle, bundle_dir / "fits.csv", fits_table(fit_deviation_curves(deviations, SweepAxis::chi)));
  } else if (fs::exists(bundle_dir / "timeseries.csv")) {
    const auto series = averages_from_table(read_csv(bundle_dir / "timeseries.csv"));
    const auto deviations = deviations_or_warn(series, SweepAxis::time, bundle);
    emit(bundle, bundle_dir / "deviations.csv", deviations_table(deviations, SweepAxis::time));
    emit(bundle, bundle_dir / "fits.csv", fits_table(fit_deviation_curves(deviations, SweepAxis::time)));
    emit(bundle, bundle_dir / "saturation.csv", saturation_table(saturation_rows(series, saturation_epsilon)));
  } else {
    throw std::invalid_argument("no averages.csv or timeseries.csv in " + bundle_dir.string());
  }
  return bundle;
}

OutputBundle cmd_plot(const fs::path& bundle_dir) {
  OutputBundle bundle;
  bundle.dir = bundle_dir;
  if (!fs::is_directory(bundle_dir)) throw std::invalid_argument("bundle directory " + bundle_dir.string() + " not found");

  if (auto t = read_if_present(bundle_dir / "averages.csv", bundle)) {
    const auto table = averages_from_table(*t);
    for (int rank : {1, 2}) {
      PlotSpec spec;
      spec.title = "Averaged SRE M" + std::to_string(rank) + " vs bond dimension";
      spec.x_label = "chi";
      spec.y_label = "M" + std::to_string(rank) + " (mean)";
      std::map<std::size_t, PlotSeries> by_n;
      for (const auto& p : table) {
        if (p.chi == kInfiniteChi) continue;
        auto& s = by_n[p.n_sites];
        s.label = label_n(p.n_sites, 0, false);
        s.points.emplace_back(static_cast<double>(p.chi), rank == 1 ? p.m1_bar : p.m2_bar);
      }
      for (auto& [n, s] : by_n) {
        spec.series.push_back(s);
        if (rank == 2 && !s.points.empty()) {
          const double ref = m2_haar(n);
          spec.series.push_back({"Haar N=" + std::to_string(n),
                                 {{s.points.front().first, ref}, {s.points.back().first, ref}}, true, false});
        }
      }
      write_svg(bundle, bundle_dir / ("mbar_vs_chi_n" + std::to_string(rank) + ".svg"), spec);
    }
  }

  std::optional<CsvTable> fits;
  if (fs::exists(bundle_dir / "fits.csv")) fits = read_csv(bundle_dir / "fits.csv");

  if (auto t = read_if_present(bundle_dir / "deviations.csv", bundle)) {
    const bool vs_t = t->text(0, "axis") == "t";
    for (int rank : {1, 2}) {
      PlotSpec spec;
      const std::string r = std::to_string(rank);
      spec.title = "ln Delta M" + r + (vs_t ? " vs time" : " vs bond dimension");
      spec.x_label = vs_t ? "t" : "chi";
      spec.y_label = "ln Delta M" + r;
      std::map<std::pair<std::size_t, std::string>, PlotSeries> curves;
      for (std::size_t i = 0; i < t->rows.size(); ++i) {
        if (t->text(i, "x") == "inf") continue;
        const double y = t->number(i, "delta_m" + r);
        const double err = t->number(i, "sem" + r);
        if (!(y > kNoiseFloorSigmas * err) || !(y > 0.0)) continue;
        const auto n = static_cast<std::size_t>(t->number(i, "N"));
        const std::string chi = t->text(i, "chi");
        auto& s = curves[{n, vs_t ? chi : std::string()}];
        s.label = "N=" + std::to_string(n) + (vs_t ? " chi=" + chi : "");
        s.points.emplace_back(t->number(i, "x"), std::log(y));
      }
      for (auto& [key, s] : curves) {
        spec.series.push_back(s);
        if (!fits || s.points.size() < 2) continue;
        for (std::size_t i = 0; i < fits->rows.size(); ++i) {
          if (fits->text(i, "status") != "ok" || fits->text(i, "rank") != r) continue;
          if (fits->text(i, "kind") != (vs_t ? "gamma" : "alpha")) continue;
          if (fits->text(i, "N") != std::to_string(key.first)) continue;
          if (vs_t && fits->text(i, "chi") != key.second) continue;
          const double slope = fits->number(i, "slope");
          const double intercept = fits->number(i, "intercept");
          const double x0 = s.points.front().first;
          const double x1 = s.points.back().first;
          spec.series.push_back({"fit " + s.label, {{x0, intercept + slope * x0}, {x1, intercept + slope * x1}},
                                 true, false});
        }
      }
      write_svg(bundle, bundle_dir / ((vs_t ? "deviation_vs_t_n" : "deviation_vs_chi_n") + r + ".svg"), spec);
    }
  }

  if (fits && !fits->empty() && fits->has_column("kind")) {
    PlotSpec spec;
    spec.title = "Deviation amplitude beta_n vs N";
    spec.x_label = "N";
    spec.y_label = "beta_n";
    bool any = false;
    for (int rank : {1, 2}) {
      const std::string r = std::to_string(rank);
      PlotSeries pts{"beta" + r, {}, false, true};
      for (std::size_t i = 0; i < fits->rows.size(); ++i) {
        if (fits->text(i, "kind") == "alpha" && fits->text(i, "rank") == r && fits->text(i, "status") == "ok") {
          pts.points.emplace_back(fits->number(i, "N"), fits->number(i, "amplitude"));
        }
      }
      if (pts.points.empty()) continue;
      any = true;
      spec.series.push_back(pts);
      for (std::size_t i = 0; i < fits->rows.size(); ++i) {
        if (fits->text(i, "kind") == "lambda" && fits->text(i, "rank") == r && fits->text(i, "status") == "ok") {
          const double slope = fits->number(i, "slope");
          const double intercept = fits->number(i, "intercept");
          const double x0 = pts.points.front().first;
          const double x1 = pts.points.back().first;
          spec.series.push_back({"fit beta" + r, {{x0, intercept + slope * x0}, {x1, intercept + slope * x1}}, true,
                                 false});
        }
      }
    }
    if (any) write_svg(bundle, bundle_dir / "beta_vs_N.svg", spec);
  }

  if (auto t = read_if_present(bundle_dir / "timeseries.csv", bundle)) {
    const auto series = averages_from_table(*t);
    struct Panel {
      const char* file;
      const char* title;
      const char* y_label;
      double AveragedPoint::*field;
    };
    const Panel panels[] = {
        {"timeseries_m1.svg", "Averaged M1 vs time", "M1 (mean)", &AveragedPoint::m1_bar},
        {"timeseries_m2.svg", "Averaged M2 vs time", "M2 (mean)", &AveragedPoint::m2_bar},
        {"timeseries_s.svg", "Max-cut entanglement vs time", "S (bits, mean)", &AveragedPoint::s_bar},
        {"timeseries_bond.svg", "Bond dimension vs time", "max bond (mean)", &AveragedPoint::max_bond_mean},
    };
    for (const auto& panel : panels) {
      PlotSpec spec;
      spec.title = panel.title;
      spec.x_label = "t";
      spec.y_label = panel.y_label;
      std::map<std::pair<std::size_t, std::size_t>, PlotSeries> curves;
      for (const auto& p : series) {
        auto& s = curves[{p.n_sites, p.chi}];
        s.label = label_n(p.n_sites, p.chi, true);
        s.points.emplace_back(static_cast<double>(p.t.value_or(0)), p.*panel.field);
      }
      for (auto& [key, s] : curves) spec.series.push_back(s);
      write_svg(bundle, bundle_dir / panel.file, spec);
    }
  }

  if (bundle.files.empty() && bundle.warnings.empty()) {
    bundle.warnings.emplace_back("no plottable CSV files in " + bundle_dir.string());
  }
  return bundle;
}

}  // namespace magicmps::io
