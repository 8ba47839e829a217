#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "magicmps/experiment.hpp"

namespace magicmps::io {

/// Parses the [exp1] or [exp2] section of a key/value config file:
///
///   [exp1]
///   N_list = 8, 12
///   chi_list = 1..12, inf
///   depth = 40
///   n_trajectories = 100
///   master_seed = 7
///
///   [exp2]
///   N_list = 11
///   chi_sre_map = 11:15
///   reference_chi = 32
///
/// Lists are comma separated; "a..b" expands to an inclusive integer range.
/// Unknown keys or sections are errors (std::invalid_argument).
ExperimentConfig parse_experiment_config(std::string_view text, int experiment);
ExperimentConfig load_experiment_config(const std::filesystem::path& path, int experiment);

/// Canonical text form; parse_experiment_config(to_config_text(c), c.experiment) == c.
std::string to_config_text(const ExperimentConfig& config);

}  // namespace magicmps::io
