#include "magicmps/io/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "magicmps/io/csv.hpp"

namespace magicmps::io {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_integer(const std::string& key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config key '" + key + "': expected a number, got '" + text + "'");
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text, bool allow_inf) {
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw std::invalid_argument("config key '" + key + "': empty list item");
    if (allow_inf && item == "inf") {
      out.push_back(kInfiniteChi);
      continue;
    }
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const auto lo = parse_integer<std::size_t>(key, trim(item.substr(0, dots)));
      const auto hi = parse_integer<std::size_t>(key, trim(item.substr(dots + 2)));
      if (hi < lo) throw std::invalid_argument("config key '" + key + "': empty range '" + item + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
      continue;
    }
    out.push_back(parse_integer<std::size_t>(key, item));
  }
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& values, bool inf_zero) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += (inf_zero && values[i] == kInfiniteChi) ? "inf" : std::to_string(values[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text, int experiment) {
  if (experiment != 1 && experiment != 2) throw std::invalid_argument("experiment must be 1 or 2");
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }

  for (const auto& [name, section] : tree) {
    if (name != "exp1" && name != "exp2") {
      throw std::invalid_argument("unknown config section or top-level key '" + name + "'");
    }
  }
  const std::string wanted = experiment == 1 ? "exp1" : "exp2";
  const auto section = tree.get_child_optional(wanted);
  if (!section) throw std::invalid_argument("config has no [" + wanted + "] section");

  ExperimentConfig c = default_config(experiment);
  std::set<std::string> seen;
  for (const auto& [key, node] : *section) {
    const std::string value = trim(node.data());
    if (!seen.insert(key).second) throw std::invalid_argument("duplicate config key '" + key + "'");
    if (key == "N_list") {
      c.n_list = parse_size_list(key, value, false);
    } else if (key == "chi_list" && experiment == 1) {
      c.chi_list = parse_size_list(key, value, true);
    } else if (key == "chi_sre_map" && experiment == 2) {
      for (const auto& item : split(value, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
          throw std::invalid_argument("config key 'chi_sre_map': expected N:chi, got '" + item + "'");
        }
        c.chi_sre_map[parse_integer<std::size_t>(key, trim(item.substr(0, colon)))] =
            parse_integer<std::size_t>(key, trim(item.substr(colon + 1)));
      }
    } else if (key == "reference_chi" && experiment == 2) {
      c.reference_chi = parse_integer<std::size_t>(key, value);
    } else if (key == "depth") {
      c.depth = parse_integer<std::size_t>(key, value);
    } else if (key == "n_trajectories") {
      c.n_trajectories = parse_integer<std::size_t>(key, value);
    } else if (key == "n_samples") {
      c.n_samples = parse_integer<std::size_t>(key, value);
    } else if (key == "master_seed") {
      c.master_seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "output") {
      c.output = value;
    } else if (key == "threads") {
      c.threads = parse_integer<std::size_t>(key, value);
    } else if (key == "svd_tol") {
      c.svd_tol = parse_real(key, value);
    } else if (key == "max_chi") {
      c.max_chi = parse_integer<std::size_t>(key, value);
    } else if (key == "saturation_epsilon") {
      c.saturation_epsilon = parse_real(key, value);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "' in [" + wanted + "]");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path, int experiment) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str(), experiment);
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << '[' << (c.experiment == 1 ? "exp1" : "exp2") << "]\n";
  out << "N_list = " << join_sizes(c.n_list, false) << '\n';
  if (c.experiment == 1) {
    out << "chi_list = " << join_sizes(c.chi_list, true) << '\n';
  } else {
    out << "chi_sre_map = ";
    bool first = true;
    for (const auto& [n, chi] : c.chi_sre_map) {
      out << (first ? "" : ", ") << n << ':' << chi;
      first = false;
    }
    out << '\n';
    if (c.reference_chi) out << "reference_chi = " << *c.reference_chi << '\n';
  }
  out << "depth = " << c.depth << '\n';
  out << "n_trajectories = " << c.n_trajectories << '\n';
  if (c.n_samples) out << "n_samples = " << *c.n_samples << '\n';
  out << "master_seed = " << c.master_seed << '\n';
  out << "output = " << c.output << '\n';
  out << "threads = " << c.threads << '\n';
  out << "svd_tol = " << format_exact(c.svd_tol) << '\n';
  out << "max_chi = " << c.max_chi << '\n';
  out << "saturation_epsilon = " << format_exact(c.saturation_epsilon) << '\n';
  return out.str();
}

}  // namespace magicmps::io
