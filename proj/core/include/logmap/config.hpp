#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "logmap/density.hpp"
#include "logmap/thermo.hpp"

namespace logmap {

/// Everything a sweep or single-mu run needs. Defaults are the full-scale
/// settings: N = 1e6 orbit points, W = 1e4 bins, M = 1e5 ensemble members,
/// temperature series up to N = 1e3.
struct SweepConfig {
  std::string profile = "paper";
  std::string mu_grid_spec = "0.05:4:0.05";
  std::vector<double> mu_grid;  ///< expanded from mu_grid_spec
  std::size_t n_steps = 1'000'000;
  std::size_t w_bins = 10'000;
  std::size_t m_members = 100'000;
  std::size_t n_max_temperature = 1'000;
  std::size_t burn_in = 1'000;
  std::uint64_t seed = 20240601;
  std::filesystem::path output_dir = "logmap-out";
  unsigned workers = 0;  ///< 0 = all hardware threads
  TransientParams transient;

  // Single-mu subcommands (density, evolve, temperature).
  double mu = 4.0;
  std::string density_method = "histogram";  ///< histogram | ulam | analytic
  std::size_t samples_per_bin = 1'000;
  std::size_t evolve_steps = 100;
  std::string evolve_init = "uniform";  ///< uniform | single_bin:<k> | point:<x0>
  double frieden_tol = 1e-3;
};

/// Full-scale defaults with the default grid expanded.
SweepConfig default_config();

/// "paper" (W=1e4, N=1e6, M=1e5) or "desk" (W=100, N=1e6, M=1e4).
void apply_profile(SweepConfig& config, std::string_view profile);

/// Sets one field by its key (dashes and underscores are interchangeable).
/// Throws ConfigError naming the key on unknown keys or malformed values.
void apply_setting(SweepConfig& config, std::string_view key, std::string_view value);

/// Names of every key accepted by apply_setting, in echo order.
const std::vector<std::string>& config_keys();

/// Current value of a key, formatted as apply_setting would accept it.
std::string config_value(const SweepConfig& config, std::string_view key);

/// `key = value` lines; '#' starts a comment. A `profile` line is applied
/// before the other keys regardless of its position.
SweepConfig parse_config_text(std::string_view text, SweepConfig base = default_config());

SweepConfig load_config_file(const std::filesystem::path& path,
                             SweepConfig base = default_config());

/// Range and consistency checks; throws ConfigError naming the field.
/// Warns (does not throw) when n_steps < 10 * w_bins.
void validate(const SweepConfig& config);

/// "start:stop:step" or a comma-separated list; values rounded to 1e-10
/// and deduplicated, sorted ascending. Every value must lie in (0,4].
std::vector<double> parse_mu_grid(std::string_view spec);

/// "uniform", "single_bin:<k>" (k < w_bins) or "point:<x0>".
InitSpec parse_init_spec(std::string_view spec, std::size_t w_bins);

/// The effective configuration as key = value lines. `workers` and
/// `output-dir` are left out when include_workers is false, so CSV headers
/// do not depend on where or how parallel a run was.
std::string echo_config(const SweepConfig& config, bool include_workers = true);

}  // namespace logmap
