#include "magicmps/io/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace magicmps::io {

namespace {

std::string chi_text(std::size_t chi) { return chi == kInfiniteChi ? "inf" : std::to_string(chi); }

std::size_t parse_chi(const std::string& s) {
  if (s == "inf") return kInfiniteChi;
  return static_cast<std::size_t>(std::stoull(s));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::invalid_argument("CSV is missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const std::string& s = text(row, name);
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("CSV column '" + name + "' holds non-numeric value '" + s + "'");
  }
}

const std::string& CsvTable::text(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

std::string CsvTable::body() const {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(header);
  for (const auto& r : rows) append_row(r);
  return out;
}

std::string format_number(double value) {
  char buf[64];
  if (value == 0.0) value = 0.0;  // no "-0"
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string format_exact(double value) {
  char buf[64];
  if (value == 0.0) value = 0.0;  // no "-0"
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# schema: " << table.schema << '\n' << table.body();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string tag = "# schema: ";
      if (line.rfind(tag, 0) == 0) table.schema = line.substr(tag.size());
      continue;
    }
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != table.header.size()) {
        throw std::invalid_argument(path.string() + ": row has " + std::to_string(cells.size()) +
                                    " cells, header has " + std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

CsvTable averages_table(std::span<const AveragedPoint> points, std::uint64_t master_seed, bool time_series) {
  CsvTable t;
  t.schema = time_series ? "timeseries/v1" : "averages/v1";
  t.header = {"N", "chi"};
  if (time_series) t.header.push_back("t");
  for (const char* h : {"m1_bar", "sem1", "m2_bar", "sem2", "s_bar", "sem_s", "max_bond_mean", "required_bond_mean",
                        "est_se1", "est_se2", "n_traj", "master_seed", "traj_first", "traj_last"}) {
    t.header.emplace_back(h);
  }
  for (const auto& p : points) {
    std::vector<std::string> r = {std::to_string(p.n_sites), chi_text(p.chi)};
    if (time_series) r.push_back(p.t ? std::to_string(*p.t) : "");
    for (double v : {p.m1_bar, p.sem1, p.m2_bar, p.sem2, p.s_bar, p.sem_s, p.max_bond_mean, p.required_bond_mean,
                     p.est_se1, p.est_se2}) {
      r.push_back(format_number(v));
    }
    r.push_back(std::to_string(p.n_traj));
    r.push_back(std::to_string(master_seed));
    r.push_back("0");
    r.push_back(std::to_string(p.n_traj == 0 ? 0 : p.n_traj - 1));
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::vector<AveragedPoint> averages_from_table(const CsvTable& table) {
  std::vector<AveragedPoint> out;
  const bool time_series = table.has_column("t");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    AveragedPoint p;
    p.n_sites = static_cast<std::size_t>(table.number(i, "N"));
    p.chi = parse_chi(table.text(i, "chi"));
    if (time_series) p.t = static_cast<std::size_t>(table.number(i, "t"));
    p.m1_bar = table.number(i, "m1_bar");
    p.sem1 = table.number(i, "sem1");
    p.m2_bar = table.number(i, "m2_bar");
    p.sem2 = table.number(i, "sem2");
    p.s_bar = table.number(i, "s_bar");
    p.sem_s = table.number(i, "sem_s");
    p.max_bond_mean = table.number(i, "max_bond_mean");
    if (table.has_column("required_bond_mean")) p.required_bond_mean = table.number(i, "required_bond_mean");
    if (table.has_column("est_se1")) p.est_se1 = table.number(i, "est_se1");
    if (table.has_column("est_se2")) p.est_se2 = table.number(i, "est_se2");
    p.n_traj = static_cast<std::size_t>(table.number(i, "n_traj"));
    out.push_back(p);
  }
  return out;
}

CsvTable deviations_table(std::span<const DeviationPoint> points, SweepAxis axis) {
  CsvTable t;
  t.schema = "deviations/v1";
  t.header = {"N", "chi", "t", "axis", "x", "delta_m1", "sem1", "delta_m2", "sem2", "sat_m1", "sat_m2"};
  for (const auto& d : points) {
    t.rows.push_back({std::to_string(d.n_sites), chi_text(d.chi), d.t ? std::to_string(*d.t) : "",
                      axis == SweepAxis::chi ? "chi" : "t", d.chi == kInfiniteChi && axis == SweepAxis::chi
                                                                 ? "inf"
                                                                 : format_number(d.x),
                      format_number(d.delta_m1), format_number(d.sem1), format_number(d.delta_m2),
                      format_number(d.sem2), format_number(d.sat_m1), format_number(d.sat_m2)});
  }
  return t;
}

CsvTable fits_table(std::span<const FitRow> rows) {
  CsvTable t;
  t.schema = "fits/v1";
  t.header = {"kind",  "rank",      "N",         "chi",         "model",  "slope", "intercept",
              "rate",  "amplitude", "r_squared", "points_used", "status", "note"};
  for (const auto& r : rows) {
    std::vector<std::string> cells = {r.kind, std::to_string(r.rank), r.n_sites ? std::to_string(r.n_sites) : "",
                                      r.kind == "gamma" ? chi_text(r.chi) : ""};
    if (r.fit) {
      const auto& f = *r.fit;
      cells.insert(cells.end(), {to_string(f.model), format_number(f.slope), format_number(f.intercept),
                                 format_number(f.rate()), format_number(f.amplitude()), format_number(f.r_squared),
                                 std::to_string(f.points_used), "ok", ""});
    } else {
      cells.insert(cells.end(), {"", "", "", "", "", "", "0", "rejected", r.note});
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable saturation_table(std::span<const SaturationRow> rows) {
  CsvTable t;
  t.schema = "saturation/v1";
  t.header = {"N", "chi", "quantity", "target", "epsilon", "t_sat", "status"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n_sites), chi_text(r.chi), r.quantity, format_number(r.target),
                      format_number(r.epsilon), r.t_sat ? format_number(*r.t_sat) : "",
                      r.t_sat ? "saturated" : "not saturated within depth"});
  }
  return t;
}

CsvTable comparison_table(std::span<const ComparisonRow> rows) {
  CsvTable t;
  t.schema = "comparison/v1";
  t.header = {"N",     "t",     "chi_cap", "chi_ref", "m2_cap",        "m2_ref", "m2_diff", "combined_se_m2",
              "m2_within_3se", "s_cap", "s_ref", "s_diff",  "combined_se_s"};
  for (const auto& r : rows) {
    const double d = r.m2_cap - r.m2_ref;
    t.rows.push_back({std::to_string(r.n_sites), std::to_string(r.t), chi_text(r.chi_cap), chi_text(r.chi_ref),
                      format_number(r.m2_cap), format_number(r.m2_ref), format_number(d),
                      format_number(r.combined_se_m2),
                      std::abs(d) <= 3.0 * r.combined_se_m2 ? "yes" : "no", format_number(r.s_cap),
                      format_number(r.s_ref), format_number(r.s_cap - r.s_ref), format_number(r.combined_se_s)});
  }
  return t;
}

CsvTable samples_table(std::span<const SampleDumpRow> rows) {
  CsvTable t;
  t.schema = "samples/v1";
  t.header = {"trajectory", "sample_index", "string", "c", "xi"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.trajectory), std::to_string(r.sample_index), r.record.string.str(),
                      format_number(r.record.c), format_number(r.record.xi)});
  }
  return t;
}

}  // namespace magicmps::io
