#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logmap/config.hpp"
#include "logmap/csv.hpp"
#include "logmap/quantifiers.hpp"
#include "logmap/thermo.hpp"

namespace logmap {

inline constexpr std::string_view kVersion = "0.1.0";

/// One mu of a sweep: invariant-density quantifiers joined with the
/// averaged map temperature. A failed mu keeps its row with `error` set
/// and NaN numeric fields.
struct SweepRow {
  double mu = 0.0;
  double fisher = 0.0;
  double variance = 0.0;
  double cr_complexity = 0.0;
  double cr_complexity_bin_units = 0.0;
  double t_avg = 0.0;
  double t_norm = 0.0;
  std::size_t n0 = 0;
  bool n0_fallback = false;
  std::uint64_t seed = 0;
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

struct SweepResult {
  std::vector<SweepRow> rows;               ///< sorted by mu
  std::vector<TemperatureSeries> series;    ///< aligned with rows; empty series for failed rows
  std::optional<double> temperature_argmax_mu;

  std::size_t failures() const;
};

/// Per-mu stream of the sweep seed. Keyed by mu itself, so a mu gets the
/// same random numbers whatever grid or worker count it runs with.
std::uint64_t job_stream(double mu);

/// Runs every mu of config.mu_grid on config.workers threads. Output is a
/// deterministic function of the config with `workers` excluded.
SweepResult run_sweep(const SweepConfig& config);

/// Quantifier records of a sweep, for the quantifier CSV schema.
std::vector<QuantifierRecord> quantifier_records(const SweepResult& result, const SweepConfig& config);

struct EvolutionPoint {
  std::size_t n = 0;
  double fisher = 0.0;
  double cr_complexity = 0.0;
  double temperature = 0.0;
};

struct EvolutionResult {
  double mu = 0.0;
  std::vector<EvolutionPoint> points;  ///< n = 0 .. evolve_steps
  double frieden_tol = 1e-3;
  std::size_t frieden_violations = 0;  ///< steps where fisher grew by more than frieden_tol
};

/// Tracks an ensemble (config.evolve_init, config.m_members, config.seed)
/// for config.evolve_steps steps, recording the histogram quantifiers on
/// config.w_bins bins and the map temperature at every step.
EvolutionResult run_evolution(const MapParams& params, const SweepConfig& config);

struct TemperatureJoinRow {
  double t_avg = 0.0;
  double fisher = 0.0;
  double cr_complexity = 0.0;
  double mu = 0.0;
};

/// Successful rows re-sorted by t_avg ascending (stable, so equal
/// temperatures keep their mu order).
std::vector<TemperatureJoinRow> join_vs_temperature(std::span<const SweepRow> rows);

/// Spearman rank correlation with average ranks for ties; NaN when either
/// side is constant or fewer than two points are given.
double spearman(std::span<const double> a, std::span<const double> b);

// CSV ------------------------------------------------------------------------

/// Metadata header shared by every output: version, seed and the
/// worker-independent config echo.
Metadata run_metadata(const SweepConfig& config);

/// Columns: mu, fisher, variance, cr_complexity, cr_complexity_bin_units,
/// t_avg, t_norm, n0, seed, error.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, const Metadata& meta = {});
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Columns: mu, t_avg, t_norm, n0, m_members, seed.
void write_temperature_summary_csv(std::ostream& out, std::span<const SweepRow> rows,
                                   std::size_t m_members, const Metadata& meta = {});

/// Columns: n, fisher, cr_complexity, temperature; footer
/// `# frieden_violations=<count>`.
void write_evolution_csv(std::ostream& out, const EvolutionResult& result, const Metadata& meta = {});

/// Columns: t_avg, fisher, cr_complexity, mu; the Spearman coefficient of
/// fisher against t_avg goes into the header.
void write_join_csv(std::ostream& out, std::span<const TemperatureJoinRow> rows, const Metadata& meta = {});

/// Writes sweep.csv, quantifiers.csv, temperature_series.csv,
/// temperature_summary.csv, fisher_vs_temperature.csv and
/// effective_config.txt into `dir`. Returns the written paths.
std::vector<std::filesystem::path> write_sweep_outputs(const SweepResult& result,
                                                       const SweepConfig& config,
                                                       const std::filesystem::path& dir);

}  // namespace logmap
