#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "magicmps/io/commands.hpp"
#include "magicmps/io/config.hpp"
#include "magicmps/io/svg.hpp"
#include "magicmps/oracle.hpp"

using namespace magicmps;
using namespace magicmps::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("magicmps_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig minimal_exp1() {
  return parse_experiment_config(
      "[exp1]\n"
      "N_list = 8\n"
      "chi_list = 1..12\n"
      "depth = 12\n"
      "n_trajectories = 10\n"
      "n_samples = 200\n"
      "master_seed = 5\n",
      1);
}

}  // namespace

TEST(ConfigText, ParsesSectionsListsAndRanges) {
  const auto c = parse_experiment_config(
      "; comment\n[exp1]\nN_list = 8, 12\nchi_list = 1..3, 8, inf\ndepth = 40\nmaster_seed = 7\nthreads = 2\n", 1);
  EXPECT_EQ(c.n_list, (std::vector<std::size_t>{8, 12}));
  EXPECT_EQ(c.chi_list, (std::vector<std::size_t>{1, 2, 3, 8, kInfiniteChi}));
  EXPECT_EQ(c.master_seed, 7u);
  EXPECT_EQ(c.threads, 2u);

  const auto e2 = parse_experiment_config(
      "[exp2]\nN_list = 11, 15\nchi_sre_map = 11:15, 15:16\nreference_chi = 32\ndepth = 20\n", 2);
  EXPECT_EQ(e2.chi_sre_map.at(11), 15u);
  EXPECT_EQ(e2.chi_sre_map.at(15), 16u);
  EXPECT_EQ(e2.reference_chi, 32u);
}

TEST(ConfigText, Errors) {
  EXPECT_THROW(parse_experiment_config("[exp1]\nN_list = 8\nchi_list = 2\nbogus = 1\n", 1), std::invalid_argument);
  EXPECT_THROW(parse_experiment_config("[exp1]\nN_list = 8\nchi_list = 2\ndepth = 0\n", 1), std::invalid_argument);
  EXPECT_THROW(parse_experiment_config("[exp1]\nN_list = eight\nchi_list = 2\n", 1), std::invalid_argument);
  EXPECT_THROW(parse_experiment_config("[exp2]\nN_list = 8\n", 1), std::invalid_argument);
  EXPECT_THROW(parse_experiment_config("[exp2]\nN_list = 8\ndepth = 0\nchi_sre_map = 8:4\n", 2),
               std::invalid_argument);
  EXPECT_THROW(parse_experiment_config("[exp1\n", 1), std::invalid_argument);
  EXPECT_THROW(load_experiment_config("/nonexistent/config.ini", 1), std::invalid_argument);
}

TEST(ConfigText, CanonicalTextRoundTrips) {
  auto c = minimal_exp1();
  c.svd_tol = 1.0 / 3.0 * 1e-8;
  c.chi_list.push_back(kInfiniteChi);
  EXPECT_EQ(parse_experiment_config(to_config_text(c), 1), c);
  auto e2 = parse_experiment_config("[exp2]\nN_list = 11\nchi_sre_map = 11:15\nreference_chi = 32\n", 2);
  EXPECT_EQ(parse_experiment_config(to_config_text(e2), 2), e2);
}

TEST(Csv, NineSignificantDigitsAndHeader) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(123456789012.0), "1.23456789e+11");
  const fs::path dir = scratch("csv");
  fs::create_directories(dir);
  CsvTable t{"demo/v1", {"a", "b"}, {{"1", "x"}, {"2", "y"}}};
  write_csv(dir / "t.csv", t);
  const auto text = slurp(dir / "t.csv");
  EXPECT_EQ(text, "# schema: demo/v1\na,b\n1,x\n2,y\n");
  const auto back = read_csv(dir / "t.csv");
  EXPECT_EQ(back.schema, "demo/v1");
  EXPECT_EQ(back.body(), t.body());
  EXPECT_EQ(back.number(1, "a"), 2.0);
  EXPECT_THROW(back.column("missing"), std::invalid_argument);
}

TEST(CmdExp1, RowCountsDeterminismAndMetadata) {
  const auto c = minimal_exp1();
  const fs::path a = scratch("exp1_a");
  const fs::path b = scratch("exp1_b");
  cmd_exp1(c, a);
  cmd_exp1(c, b, {3, TrajectoryOrder::reverse});

  const auto averages = read_csv(a / "averages.csv");
  EXPECT_EQ(averages.schema, "averages/v1");
  EXPECT_EQ(averages.rows.size(), 12u);
  EXPECT_EQ(averages.text(0, "master_seed"), "5");
  EXPECT_EQ(averages.text(0, "traj_first"), "0");
  EXPECT_EQ(averages.text(0, "traj_last"), "9");

  const auto fits = read_csv(a / "fits.csv");
  int alpha2 = 0;
  for (std::size_t i = 0; i < fits.rows.size(); ++i) {
    if (fits.text(i, "kind") == "alpha" && fits.text(i, "rank") == "2") ++alpha2;
  }
  EXPECT_EQ(alpha2, 1);

  for (const char* f : {"averages.csv", "deviations.csv", "fits.csv"}) {
    EXPECT_EQ(read_csv(a / f).body(), read_csv(b / f).body()) << f;
  }

  const auto meta = nlohmann::json::parse(slurp(a / "metadata.json"));
  EXPECT_EQ(meta["master_seed"], 5);
  EXPECT_EQ(meta["rng"], std::string(kRngIdentifier));
  EXPECT_EQ(parse_experiment_config(meta["config_text"].get<std::string>(), 1), c);
}

TEST(CmdExp1, SingleChiRejectsFit) {
  auto c = minimal_exp1();
  c.n_list = {6, 8};
  c.chi_list = {1};
  const fs::path dir = scratch("exp1_chi1");
  cmd_exp1(c, dir);
  EXPECT_EQ(read_csv(dir / "deviations.csv").rows.size(), 2u);
  const auto fits = read_csv(dir / "fits.csv");
  ASSERT_FALSE(fits.rows.empty());
  for (std::size_t i = 0; i < fits.rows.size(); ++i) {
    EXPECT_EQ(fits.text(i, "status"), "rejected");
    if (fits.text(i, "kind") == "alpha") EXPECT_EQ(fits.text(i, "note"), "fewer than 3 usable points");
  }
}

TEST(CmdExp2, TimeRowsSaturationAndComparison) {
  auto c = parse_experiment_config(
      "[exp2]\nN_list = 11\nchi_sre_map = 11:15\nreference_chi = 32\ndepth = 20\nn_trajectories = 3\n"
      "n_samples = 100\nmaster_seed = 2\n",
      2);
  const fs::path dir = scratch("exp2");
  cmd_exp2(c, dir);
  const auto ts = read_csv(dir / "timeseries.csv");
  EXPECT_EQ(ts.schema, "timeseries/v1");
  EXPECT_EQ(ts.rows.size(), 42u);  // t = 0..20 for each cap
  for (const char* col : {"N", "t", "m1_bar", "sem1", "m2_bar", "sem2", "s_bar", "sem_s", "max_bond_mean"}) {
    EXPECT_TRUE(ts.has_column(col)) << col;
  }
  EXPECT_EQ(read_csv(dir / "comparison.csv").rows.size(), 21u);
  EXPECT_EQ(read_csv(dir / "saturation.csv").rows.size(), 6u);
  for (std::size_t i = 0; i < 21; ++i) EXPECT_LE(ts.number(i, "s_bar"), std::log2(15.0) + 1e-9);
}

TEST(CmdOracleCheck, Examples) {
  const auto r = cmd_oracle_check(6, 12, 1, 4000);
  EXPECT_GE(r.fidelity, 1.0 - 1e-8);
  EXPECT_TRUE(r.entropy_ok());
  EXPECT_TRUE(r.passed()) << r.to_text();

  const auto zero = cmd_oracle_check(2, 0, 0, 100);
  EXPECT_EQ(zero.m1_exact, 0.0);
  EXPECT_EQ(zero.m2_exact, 0.0);
  EXPECT_EQ(zero.sampled.m1, 0.0);
  EXPECT_EQ(zero.sampled.m2, 0.0);
  EXPECT_EQ(zero.max_entropy_diff, 0.0);

  const auto deep = cmd_oracle_check(8, 40, 3, 500);
  EXPECT_NEAR(deep.m2_exact, m2_haar(8), 0.1);
  EXPECT_THROW(cmd_oracle_check(9, 4, 0), std::invalid_argument);
}

TEST(CmdSample, DumpsRecords) {
  SampleRequest req;
  req.n_sites = 5;
  req.depth = 6;
  req.n_samples = 50;
  const fs::path dir = scratch("sample");
  cmd_sample(req, dir);
  const auto t = read_csv(dir / "samples.csv");
  EXPECT_EQ(t.schema, "samples/v1");
  ASSERT_EQ(t.rows.size(), 50u);
  EXPECT_EQ(t.text(0, "string").size(), 5u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double c = t.number(i, "c");
    EXPECT_NEAR(t.number(i, "xi"), c * c / 32.0, 1e-8);
  }
}

TEST(CmdFitAndPlot, RefitAndDeterministicSvg) {
  const auto c = minimal_exp1();
  const fs::path dir = scratch("plot");
  cmd_exp1(c, dir);
  const auto fits_before = read_csv(dir / "fits.csv");
  cmd_fit(dir);
  const auto fits_after = read_csv(dir / "fits.csv");
  ASSERT_EQ(fits_after.rows.size(), fits_before.rows.size());
  for (std::size_t i = 0; i < fits_after.rows.size(); ++i) {
    EXPECT_EQ(fits_after.text(i, "kind"), fits_before.text(i, "kind"));
    EXPECT_EQ(fits_after.text(i, "status"), fits_before.text(i, "status"));
  }

  cmd_plot(dir);
  EXPECT_TRUE(fs::exists(dir / "mbar_vs_chi_n1.svg"));
  EXPECT_TRUE(fs::exists(dir / "mbar_vs_chi_n2.svg"));
  EXPECT_TRUE(fs::exists(dir / "deviation_vs_chi_n2.svg"));
  const auto svg = slurp(dir / "deviation_vs_chi_n2.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);  // fitted line
  cmd_plot(dir);
  EXPECT_EQ(slurp(dir / "deviation_vs_chi_n2.svg"), svg);
}

TEST(CmdPlot, EmptyCsvWarnsWithoutSvg) {
  const fs::path dir = scratch("empty");
  fs::create_directories(dir);
  write_csv(dir / "averages.csv", CsvTable{"averages/v1", {"N", "chi", "m1_bar"}, {}});
  const auto bundle = cmd_plot(dir);
  EXPECT_FALSE(bundle.warnings.empty());
  EXPECT_FALSE(fs::exists(dir / "mbar_vs_chi_n1.svg"));
  EXPECT_THROW(cmd_plot(scratch("missing")), std::invalid_argument);
}

TEST(Svg, DependsOnlyOnSpec) {
  PlotSpec spec{"t", "x", "y", {{"a", {{0, 1}, {1, 2}}, false, true}, {"ref", {{0, 2}, {1, 2}}, true, false}}};
  EXPECT_EQ(render_svg(spec), render_svg(spec));
  EXPECT_NE(render_svg(spec).find("</svg>"), std::string::npos);
}
