// logmap: sweeps and single-mu runs of the logistic-map quantifier engine.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "logmap/config.hpp"
#include "logmap/csv.hpp"
#include "logmap/density.hpp"
#include "logmap/errors.hpp"
#include "logmap/pipeline.hpp"
#include "logmap/quantifiers.hpp"
#include "logmap/thermo.hpp"

namespace {

using namespace logmap;

constexpr const char* kOutputDirEnv = "LOGMAP_OUTPUT_DIR";

/// Flags shared by every subcommand: --config, plus one option per config key.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value configuration file");
    for (const auto& key : config_keys()) {
      cmd->add_option("--" + key, values[key], "config key '" + key + "'");
    }
  }

  SweepConfig resolve(CLI::App* cmd) const {
    SweepConfig c = default_config();
    if (!config_path.empty()) c = load_config_file(config_path, c);
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) c.output_dir = env;
    auto given = [&](const std::string& key) { return cmd->count("--" + key) > 0; };
    if (given("profile")) apply_setting(c, "profile", values.at("profile"));
    for (const auto& key : config_keys()) {
      if (key != "profile" && given(key)) apply_setting(c, key, values.at(key));
    }
    validate(c);
    return c;
  }
};

std::filesystem::path output_path(const SweepConfig& c, const std::string& explicit_path,
                                  const std::string& name) {
  if (!explicit_path.empty()) return explicit_path;
  std::filesystem::create_directories(c.output_dir);
  return c.output_dir / name;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

int run_sweep_command(const SweepConfig& c) {
  const SweepResult result = run_sweep(c);
  const auto files = write_sweep_outputs(result, c, c.output_dir);
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';

  std::cout << "rows: " << result.rows.size() << ", failures: " << result.failures() << '\n';
  if (result.temperature_argmax_mu) {
    std::cout << "t_avg argmax mu: " << format_real(*result.temperature_argmax_mu) << '\n';
  }
  if (result.failures() > 0) {
    for (const auto& r : result.rows) {
      if (!r.ok()) std::cerr << "mu=" << format_real(r.mu) << ": " << r.error << '\n';
    }
    return 1;
  }
  return 0;
}

int run_density_command(const SweepConfig& c, const std::string& out_path) {
  const MapParams params(c.mu);
  std::optional<HistogramDensity> density;
  Metadata meta = run_metadata(c);
  if (c.density_method == "histogram") {
    const double x0 = generic_start(params, c.seed);
    meta.emplace_back("x0", format_real(x0));
    density = estimate_invariant_density(params, x0, c.n_steps, c.w_bins, c.burn_in);
  } else if (c.density_method == "ulam") {
    density = ulam_invariant_density(ulam_transition_matrix(params, c.w_bins, c.samples_per_bin));
  } else {
    if (c.mu != 4.0) throw ConfigError("density-method", "analytic density exists only for mu = 4");
    density = discretize_analytic_mu4(c.w_bins);
  }
  const QuantifierRecord q = quantify(*density, c.mu, c.n_steps, c.seed);
  meta.emplace_back("fisher", format_real(q.fisher));
  meta.emplace_back("variance", format_real(q.variance));
  meta.emplace_back("cr_complexity", format_real(q.cr_complexity));

  const auto path = output_path(c, out_path, "density.csv");
  auto out = open_output(path);
  write_density_csv(out, *density, meta);
  std::cout << "wrote " << path.string() << "\nfisher=" << format_real(q.fisher)
            << " variance=" << format_real(q.variance)
            << " cr_complexity=" << format_real(q.cr_complexity) << '\n';
  return 0;
}

int run_evolve_command(const SweepConfig& c, const std::string& out_path) {
  const EvolutionResult r = run_evolution(MapParams(c.mu), c);
  const auto path = output_path(c, out_path, "evolution.csv");
  auto out = open_output(path);
  write_evolution_csv(out, r, run_metadata(c));
  std::cout << "wrote " << path.string() << "\nfrieden_violations=" << r.frieden_violations
            << " (tolerance " << format_real(r.frieden_tol) << ")\n";
  return 0;
}

int run_temperature_command(const SweepConfig& c, const std::string& out_path) {
  const MapParams params(c.mu);
  TemperatureSeries s = temperature_series(params, c.m_members, c.n_max_temperature, c.seed, c.workers);
  detect_transient(s, c.transient);
  const double t_avg = averaged_temperature(s);
  Metadata meta = run_metadata(c);
  meta.emplace_back("n0", std::to_string(*s.n0));
  meta.emplace_back("n0_fallback", s.n0_fallback ? "1" : "0");
  meta.emplace_back("t_avg", format_real(t_avg));

  const auto path = output_path(c, out_path, "temperature_series.csv");
  auto out = open_output(path);
  write_temperature_series_csv(out, {s}, meta);
  std::cout << "wrote " << path.string() << "\nn0=" << *s.n0 << " t_avg=" << format_real(t_avg) << '\n';
  return 0;
}

int run_join_command(const SweepConfig& c, std::string input, const std::string& out_path) {
  if (input.empty()) input = (c.output_dir / "sweep.csv").string();
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot read '" + input + "'");
  const std::vector<SweepRow> rows = read_sweep_csv(in);
  const auto joined = join_vs_temperature(rows);

  std::vector<double> t, fi;
  for (const auto& r : joined) {
    t.push_back(r.t_avg);
    fi.push_back(r.fisher);
  }
  const auto path = output_path(c, out_path, "fisher_vs_temperature.csv");
  auto out = open_output(path);
  write_join_csv(out, joined, run_metadata(c));
  std::cout << "wrote " << path.string() << "\nrows=" << joined.size()
            << " spearman_fisher_vs_t_avg=" << format_real(spearman(t, fi)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant densities, Fisher information, Cramer-Rao complexity and map "
               "temperature of the logistic map"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(logmap::kVersion));

  ConfigFlags sweep_flags, density_flags, evolve_flags, temp_flags, join_flags;
  std::string density_out, evolve_out, temp_out, join_out, join_in;

  auto* sweep = app.add_subcommand("sweep", "quantifiers and averaged temperature over a mu grid");
  sweep_flags.attach(sweep);

  auto* density = app.add_subcommand("density", "invariant density at one mu (histogram, ulam or analytic)");
  density_flags.attach(density);
  density->add_option("-o,--output", density_out, "output CSV path");

  auto* evolve = app.add_subcommand("evolve", "Fisher information, complexity and temperature versus time");
  evolve_flags.attach(evolve);
  evolve->add_option("-o,--output", evolve_out, "output CSV path");

  auto* temperature = app.add_subcommand("temperature", "map temperature series at one mu");
  temp_flags.attach(temperature);
  temperature->add_option("-o,--output", temp_out, "output CSV path");

  auto* join = app.add_subcommand("join-vs-temperature", "re-sort a sweep CSV by averaged temperature");
  join_flags.attach(join);
  join->add_option("-i,--input", join_in, "sweep CSV (default <output-dir>/sweep.csv)");
  join->add_option("-o,--output", join_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep_command(sweep_flags.resolve(sweep));
    if (*density) return run_density_command(density_flags.resolve(density), density_out);
    if (*evolve) return run_evolve_command(evolve_flags.resolve(evolve), evolve_out);
    if (*temperature) return run_temperature_command(temp_flags.resolve(temperature), temp_out);
    if (*join) return run_join_command(join_flags.resolve(join), join_in, join_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
