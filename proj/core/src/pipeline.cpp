#include "logmap/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "logmap/diagnostics.hpp"
#include "logmap/errors.hpp"
#include "logmap/parallel.hpp"

namespace logmap {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

SweepRow failed_row(double mu, std::uint64_t seed, std::string error) {
  SweepRow r;
  r.mu = mu;
  r.fisher = r.variance = r.cr_complexity = r.cr_complexity_bin_units = kNaN;
  r.t_avg = r.t_norm = kNaN;
  r.seed = seed;
  r.error = sanitize(std::move(error));
  return r;
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

double parse_field(const std::string& s) {
  if (s == "nan") return kNaN;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("sweep-csv", "cannot parse number '" + s + "'");
  }
  return v;
}

void write_text_file(const std::filesystem::path& path, auto&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  writer(out);
  if (!out) throw std::runtime_error("error while writing '" + path.string() + "'");
}

}  // namespace

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok(); }));
}

std::uint64_t job_stream(double mu) { return static_cast<std::uint64_t>(std::llround(mu * 1e9)); }

SweepResult run_sweep(const SweepConfig& config) {
  validate(config);
  const std::vector<double>& grid = config.mu_grid;
  SweepResult result;
  result.rows.resize(grid.size());
  result.series.resize(grid.size());

  parallel_for(grid.size(), config.workers, [&](std::size_t i) {
    const double mu = grid[i];
    try {
      const MapParams params(mu);
      const std::uint64_t stream = job_stream(mu);

      const double x0 = generic_start(params, config.seed ^ (stream * 0x9E3779B97F4A7C15ull));
      const HistogramDensity density =
          estimate_invariant_density(params, x0, config.n_steps, config.w_bins, config.burn_in);
      const QuantifierRecord q = quantify(density, mu, config.n_steps, config.seed);

      const Ensemble ensemble =
          Ensemble::make(config.m_members, config.seed + stream, init::Uniform{});
      TemperatureSeries series = temperature_series(params, ensemble, config.n_max_temperature, 1);
      detect_transient(series, config.transient);

      SweepRow row;
      row.mu = mu;
      row.fisher = q.fisher;
      row.variance = q.variance;
      row.cr_complexity = q.cr_complexity;
      row.cr_complexity_bin_units = q.cr_complexity_bin_units;
      row.t_avg = averaged_temperature(series);
      row.t_norm = kNaN;
      row.n0 = *series.n0;
      row.n0_fallback = series.n0_fallback;
      row.seed = config.seed;
      result.rows[i] = std::move(row);
      result.series[i] = std::move(series);
    } catch (const std::exception& e) {
      result.rows[i] = failed_row(mu, config.seed, e.what());
      result.series[i] = TemperatureSeries{};
      result.series[i].mu = mu;
    }
  });

  std::map<double, double> averages;
  for (const SweepRow& r : result.rows) {
    if (r.ok()) averages.emplace(r.mu, r.t_avg);
  }
  if (!averages.empty()) {
    try {
      const NormalizedTemperatures norm = normalize_sweep_temperatures(averages);
      result.temperature_argmax_mu = norm.argmax_mu;
      for (SweepRow& r : result.rows) {
        if (r.ok()) r.t_norm = norm.values.at(r.mu);
      }
    } catch (const DomainError& e) {
      warn(std::string("temperature normalization skipped: ") + e.what());
    }
  }
  return result;
}

std::vector<QuantifierRecord> quantifier_records(const SweepResult& result, const SweepConfig& config) {
  std::vector<QuantifierRecord> out;
  out.reserve(result.rows.size());
  for (const SweepRow& r : result.rows) {
    QuantifierRecord q;
    q.mu = r.mu;
    q.fisher = r.fisher;
    q.variance = r.variance;
    q.cr_complexity = r.cr_complexity;
    q.cr_complexity_bin_units = r.cr_complexity_bin_units;
    q.n_steps = config.n_steps;
    q.w_bins = config.w_bins;
    q.seed = r.seed;
    out.push_back(q);
  }
  return out;
}

EvolutionResult run_evolution(const MapParams& params, const SweepConfig& config) {
  validate(config);
  Ensemble ensemble = Ensemble::make(config.m_members, config.seed,
                                     parse_init_spec(config.evolve_init, config.w_bins));
  EvolutionResult result;
  result.mu = params.mu();
  result.frieden_tol = config.frieden_tol;
  result.points.reserve(config.evolve_steps + 1);

  for (std::size_t n = 0; n <= config.evolve_steps; ++n) {
    if (n > 0) ensemble.advance(params, 1, config.workers);
    const HistogramDensity p = histogram_of(ensemble.states, config.w_bins, config.workers);
    const double fi = fisher_information(p);
    result.points.push_back({n, fi, fi * variance(p), map_temperature_step(params, ensemble)});
  }
  for (std::size_t n = 0; n + 1 < result.points.size(); ++n) {
    if (result.points[n + 1].fisher - result.points[n].fisher > result.frieden_tol) {
      ++result.frieden_violations;
    }
  }
  return result;
}

std::vector<TemperatureJoinRow> join_vs_temperature(std::span<const SweepRow> rows) {
  std::vector<TemperatureJoinRow> out;
  for (const SweepRow& r : rows) {
    if (r.ok()) out.push_back({r.t_avg, r.fisher, r.cr_complexity, r.mu});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.t_avg < b.t_avg; });
  return out;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("spearman needs equally long samples");
  if (a.size() < 2) return kNaN;
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double mean = 0.5 * static_cast<double>(a.size() + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

Metadata run_metadata(const SweepConfig& config) {
  Metadata meta{{"logmap_version", std::string(kVersion)}, {"seed", std::to_string(config.seed)}};
  const std::string echo = echo_config(config, false);
  std::size_t start = 0;
  while (start < echo.size()) {
    const auto end = echo.find('\n', start);
    const std::string line = echo.substr(start, end - start);
    const auto eq = line.find(" = ");
    meta.emplace_back("config." + line.substr(0, eq), line.substr(eq + 3));
    start = end + 1;
  }
  return meta;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, const Metadata& meta) {
  write_metadata(out, meta);
  out << "mu,fisher,variance,cr_complexity,cr_complexity_bin_units,t_avg,t_norm,n0,seed,error\n";
  for (const SweepRow& r : rows) {
    out << format_real(r.mu) << ',' << format_real(r.fisher) << ',' << format_real(r.variance) << ','
        << format_real(r.cr_complexity) << ',' << format_real(r.cr_complexity_bin_units) << ','
        << format_real(r.t_avg) << ',' << format_real(r.t_norm) << ',' << r.n0 << ',' << r.seed
        << ',' << sanitize(r.error) << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::map<std::string, std::size_t> column;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (column.empty()) {
      for (std::size_t i = 0; i < fields.size(); ++i) column[fields[i]] = i;
      for (const char* required : {"mu", "fisher", "cr_complexity", "t_avg"}) {
        if (!column.count(required)) {
          throw ConfigError("sweep-csv", std::string("missing column '") + required + "'");
        }
      }
      continue;
    }
    auto get = [&](const char* name) -> std::string {
      const auto it = column.find(name);
      if (it == column.end() || it->second >= fields.size()) return {};
      return fields[it->second];
    };
    auto real = [&](const char* name) {
      const std::string s = get(name);
      return s.empty() ? kNaN : parse_field(s);
    };
    SweepRow r;
    r.mu = real("mu");
    r.fisher = real("fisher");
    r.variance = real("variance");
    r.cr_complexity = real("cr_complexity");
    r.cr_complexity_bin_units = real("cr_complexity_bin_units");
    r.t_avg = real("t_avg");
    r.t_norm = real("t_norm");
    if (const std::string n0 = get("n0"); !n0.empty()) r.n0 = std::stoull(n0);
    if (const std::string seed = get("seed"); !seed.empty()) r.seed = std::stoull(seed);
    r.error = get("error");
    rows.push_back(std::move(r));
  }
  if (column.empty()) throw ConfigError("sweep-csv", "no header row found");
  return rows;
}

void write_temperature_summary_csv(std::ostream& out, std::span<const SweepRow> rows,
                                   std::size_t m_members, const Metadata& meta) {
  write_metadata(out, meta);
  out << "mu,t_avg,t_norm,n0,m_members,seed\n";
  for (const SweepRow& r : rows) {
    out << format_real(r.mu) << ',' << format_real(r.t_avg) << ',' << format_real(r.t_norm) << ','
        << r.n0 << ',' << m_members << ',' << r.seed << '\n';
  }
}

void write_evolution_csv(std::ostream& out, const EvolutionResult& result, const Metadata& meta) {
  write_metadata(out, meta);
  out << "n,fisher,cr_complexity,temperature\n";
  for (const EvolutionPoint& p : result.points) {
    out << p.n << ',' << format_real(p.fisher) << ',' << format_real(p.cr_complexity) << ','
        << format_real(p.temperature) << '\n';
  }
  out << "# frieden_tol=" << format_real(result.frieden_tol) << '\n';
  out << "# frieden_violations=" << result.frieden_violations << '\n';
}

void write_join_csv(std::ostream& out, std::span<const TemperatureJoinRow> rows, const Metadata& meta) {
  std::vector<double> t, fi;
  for (const auto& r : rows) {
    t.push_back(r.t_avg);
    fi.push_back(r.fisher);
  }
  write_metadata(out, meta);
  out << "# spearman_fisher_vs_t_avg=" << format_real(spearman(t, fi)) << '\n';
  out << "t_avg,fisher,cr_complexity,mu\n";
  for (const auto& r : rows) {
    out << format_real(r.t_avg) << ',' << format_real(r.fisher) << ',' << format_real(r.cr_complexity)
        << ',' << format_real(r.mu) << '\n';
  }
}

std::vector<std::filesystem::path> write_sweep_outputs(const SweepResult& result,
                                                       const SweepConfig& config,
                                                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Metadata meta = run_metadata(config);
  Metadata sweep_meta = meta;
  if (result.temperature_argmax_mu) {
    sweep_meta.emplace_back("t_avg_argmax_mu", format_real(*result.temperature_argmax_mu));
  }
  const auto joined = join_vs_temperature(result.rows);

  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, auto&& writer) {
    const auto path = dir / name;
    write_text_file(path, writer);
    written.push_back(path);
  };
  emit("sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, result.rows, sweep_meta); });
  emit("quantifiers.csv",
       [&](std::ostream& o) { write_quantifier_csv(o, quantifier_records(result, config), meta); });
  emit("temperature_series.csv",
       [&](std::ostream& o) { write_temperature_series_csv(o, result.series, meta); });
  emit("temperature_summary.csv", [&](std::ostream& o) {
    write_temperature_summary_csv(o, result.rows, config.m_members, sweep_meta);
  });
  emit("fisher_vs_temperature.csv", [&](std::ostream& o) { write_join_csv(o, joined, meta); });
  emit("effective_config.txt", [&](std::ostream& o) { o << echo_config(config, true); });
  return written;
}

}  // namespace logmap
