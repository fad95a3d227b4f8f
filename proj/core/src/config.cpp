#include "logmap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "logmap/csv.hpp"
#include "logmap/diagnostics.hpp"
#include "logmap/errors.hpp"

namespace logmap {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string_view key) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

double parse_real(std::string_view field, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(field), "expected a real number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view field, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc{} && ptr == text.data() + text.size()) return v;
  // Accept integral scientific notation such as 1e6.
  const double d = parse_real(field, text);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
    throw ConfigError(std::string(field), "expected a non-negative integer, got '" +
                                              std::string(text) + "'");
  }
  return static_cast<std::uint64_t>(d);
}

double round_grid(double v) { return std::round(v * 1e10) / 1e10; }

}  // namespace

SweepConfig default_config() {
  SweepConfig c;
  c.mu_grid = parse_mu_grid(c.mu_grid_spec);
  return c;
}

void apply_profile(SweepConfig& config, std::string_view profile) {
  const std::string_view p = trim(profile);
  if (p == "paper") {
    config.w_bins = 10'000;
    config.n_steps = 1'000'000;
    config.m_members = 100'000;
  } else if (p == "desk") {
    config.w_bins = 100;
    config.n_steps = 1'000'000;
    config.m_members = 10'000;
  } else {
    throw ConfigError("profile", "unknown profile '" + std::string(p) + "' (expected paper or desk)");
  }
  config.profile = std::string(p);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "profile",         "mu-grid",        "n-steps",         "w-bins",
      "m-members",       "n-max-temperature", "burn-in",      "seed",
      "output-dir",      "workers",        "transient-window", "transient-tol",
      "transient-zero-level", "mu",        "density-method",  "samples-per-bin",
      "evolve-steps",    "evolve-init",    "frieden-tol"};
  return keys;
}

void apply_setting(SweepConfig& c, std::string_view raw_key, std::string_view raw_value) {
  const std::string key = normalize_key(raw_key);
  const std::string_view value = trim(raw_value);

  if (key == "profile") {
    apply_profile(c, value);
  } else if (key == "mu-grid") {
    try {
      c.mu_grid = parse_mu_grid(value);
    } catch (const DomainError& e) {
      throw ConfigError(key, e.what());
    }
    c.mu_grid_spec = std::string(value);
  } else if (key == "n-steps") {
    c.n_steps = parse_count(key, value);
  } else if (key == "w-bins") {
    c.w_bins = parse_count(key, value);
  } else if (key == "m-members") {
    c.m_members = parse_count(key, value);
  } else if (key == "n-max-temperature") {
    c.n_max_temperature = parse_count(key, value);
  } else if (key == "burn-in") {
    c.burn_in = parse_count(key, value);
  } else if (key == "seed") {
    c.seed = parse_count(key, value);
  } else if (key == "output-dir") {
    if (value.empty()) throw ConfigError(key, "must not be empty");
    c.output_dir = std::string(value);
  } else if (key == "workers") {
    c.workers = static_cast<unsigned>(parse_count(key, value));
  } else if (key == "transient-window") {
    c.transient.window = parse_count(key, value);
  } else if (key == "transient-tol") {
    c.transient.tol = parse_real(key, value);
  } else if (key == "transient-zero-level") {
    c.transient.zero_level = parse_real(key, value);
  } else if (key == "mu") {
    c.mu = parse_real(key, value);
  } else if (key == "density-method") {
    if (value != "histogram" && value != "ulam" && value != "analytic") {
      throw ConfigError(key, "expected histogram, ulam or analytic, got '" + std::string(value) + "'");
    }
    c.density_method = std::string(value);
  } else if (key == "samples-per-bin") {
    c.samples_per_bin = parse_count(key, value);
  } else if (key == "evolve-steps") {
    c.evolve_steps = parse_count(key, value);
  } else if (key == "evolve-init") {
    c.evolve_init = std::string(value);
  } else if (key == "frieden-tol") {
    c.frieden_tol = parse_real(key, value);
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

std::string config_value(const SweepConfig& c, std::string_view raw_key) {
  const std::string key = normalize_key(raw_key);
  if (key == "profile") return c.profile;
  if (key == "mu-grid") return c.mu_grid_spec;
  if (key == "n-steps") return std::to_string(c.n_steps);
  if (key == "w-bins") return std::to_string(c.w_bins);
  if (key == "m-members") return std::to_string(c.m_members);
  if (key == "n-max-temperature") return std::to_string(c.n_max_temperature);
  if (key == "burn-in") return std::to_string(c.burn_in);
  if (key == "seed") return std::to_string(c.seed);
  if (key == "output-dir") return c.output_dir.string();
  if (key == "workers") return std::to_string(c.workers);
  if (key == "transient-window") return std::to_string(c.transient.window);
  if (key == "transient-tol") return format_real(c.transient.tol);
  if (key == "transient-zero-level") return format_real(c.transient.zero_level);
  if (key == "mu") return format_real(c.mu);
  if (key == "density-method") return c.density_method;
  if (key == "samples-per-bin") return std::to_string(c.samples_per_bin);
  if (key == "evolve-steps") return std::to_string(c.evolve_steps);
  if (key == "evolve-init") return c.evolve_init;
  if (key == "frieden-tol") return format_real(c.frieden_tol);
  throw ConfigError(key, "unknown configuration key");
}

SweepConfig parse_config_text(std::string_view text, SweepConfig base) {
  std::vector<std::pair<std::string, std::string>> settings;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view l = line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value', got '" +
                                                               std::string(l) + "'");
    }
    settings.emplace_back(normalize_key(l.substr(0, eq)), std::string(trim(l.substr(eq + 1))));
  }
  // The profile sets several fields at once; explicit keys override it.
  for (const auto& [k, v] : settings) {
    if (k == "profile") apply_setting(base, k, v);
  }
  for (const auto& [k, v] : settings) {
    if (k != "profile") apply_setting(base, k, v);
  }
  return base;
}

SweepConfig load_config_file(const std::filesystem::path& path, SweepConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), std::move(base));
}

void validate(const SweepConfig& c) {
  if (c.mu_grid.empty()) throw ConfigError("mu-grid", "grid is empty");
  for (double mu : c.mu_grid) {
    if (!(mu > 0.0 && mu <= 4.0)) {
      throw ConfigError("mu-grid", "mu=" + format_real(mu) + " outside (0,4]");
    }
  }
  if (!(c.mu > 0.0 && c.mu <= 4.0)) throw ConfigError("mu", "mu=" + format_real(c.mu) + " outside (0,4]");
  if (c.w_bins < 2) throw ConfigError("w-bins", "need at least 2 bins");
  if (c.n_steps < 1) throw ConfigError("n-steps", "must be positive");
  if (c.m_members < 1) throw ConfigError("m-members", "must be positive");
  if (c.transient.window < 1) throw ConfigError("transient-window", "must be positive");
  if (c.n_max_temperature + 1 <= 2 * c.transient.window) {
    throw ConfigError("n-max-temperature", "series of " + std::to_string(c.n_max_temperature + 1) +
                                               " steps is too short for transient window " +
                                               std::to_string(c.transient.window));
  }
  if (!(c.transient.tol >= 0.0)) throw ConfigError("transient-tol", "must be non-negative");
  if (!(c.transient.zero_level >= 0.0)) throw ConfigError("transient-zero-level", "must be non-negative");
  if (c.samples_per_bin < 100) throw ConfigError("samples-per-bin", "must be at least 100");
  if (!(c.frieden_tol >= 0.0)) throw ConfigError("frieden-tol", "must be non-negative");
  try {
    (void)parse_init_spec(c.evolve_init, c.w_bins);
  } catch (const DomainError& e) {
    throw ConfigError("evolve-init", e.what());
  }
  if (c.n_steps < 10 * c.w_bins) {
    warn("n-steps=" + std::to_string(c.n_steps) + " is below 10 * w-bins=" +
         std::to_string(10 * c.w_bins));
  }
}

std::vector<double> parse_mu_grid(std::string_view spec) {
  std::vector<double> grid;
  std::string_view rest = spec;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;

    if (item.find(':') == std::string_view::npos) {
      grid.push_back(round_grid(parse_real("mu-grid", item)));
      continue;
    }
    const auto c1 = item.find(':');
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw ConfigError("mu-grid", "range must be start:stop:step, got '" + std::string(item) + "'");
    }
    const double start = parse_real("mu-grid", item.substr(0, c1));
    const double stop = parse_real("mu-grid", item.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_real("mu-grid", item.substr(c2 + 1));
    if (!(step > 0.0)) throw ConfigError("mu-grid", "step must be positive");
    if (stop < start) throw ConfigError("mu-grid", "stop below start");
    // Index-based generation avoids accumulating rounding error.
    for (std::size_t k = 0;; ++k) {
      const double v = start + static_cast<double>(k) * step;
      if (v > stop + 1e-9 * step) break;
      grid.push_back(round_grid(v));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double mu : grid) {
    if (!(mu > 0.0 && mu <= 4.0)) {
      throw ConfigError("mu-grid", "mu=" + format_real(mu) + " outside (0,4]");
    }
  }
  if (grid.empty()) throw ConfigError("mu-grid", "grid is empty");
  return grid;
}

InitSpec parse_init_spec(std::string_view spec, std::size_t w_bins) {
  spec = trim(spec);
  if (spec == "uniform") return init::Uniform{};
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "single_bin" || kind == "single-bin") {
    const std::uint64_t bin = parse_count("evolve-init", arg);
    if (bin >= w_bins) {
      throw DomainError("single_bin index " + std::to_string(bin) + " must be below w-bins=" +
                        std::to_string(w_bins));
    }
    return init::SingleBin{bin, w_bins};
  }
  if (kind == "point") {
    const double x0 = parse_real("evolve-init", arg);
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("point initial condition outside [0,1]");
    return init::Point{x0};
  }
  throw ConfigError("evolve-init", "expected uniform, single_bin:<k> or point:<x0>, got '" +
                                       std::string(spec) + "'");
}

std::string echo_config(const SweepConfig& c, bool include_workers) {
  std::string out;
  for (const auto& key : config_keys()) {
    if (!include_workers && (key == "workers" || key == "output-dir")) continue;
    out += key + " = " + config_value(c, key) + "\n";
  }
  return out;
}

}  // namespace logmap
