// Acceptance criteria runner. `logmap_acceptance --criterion N` checks one
// criterion; without arguments all eleven run. Every criterion prints one
// [PASS] or [FAIL] line with the measured values.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_util.hpp"
#include "CLI11.hpp"
#include "logmap/density.hpp"
#include "logmap/map.hpp"
#include "logmap/pipeline.hpp"
#include "logmap/quantifiers.hpp"
#include "logmap/random.hpp"
#include "logmap/thermo.hpp"

using namespace logmap;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool report(int id, bool pass, const std::string& what, const std::string& measured) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << what << " | "
            << measured << std::endl;
  return pass;
}

void info(const std::string& text) { std::cout << "       " << text << std::endl; }

SweepConfig profile_config(std::string_view profile) {
  SweepConfig c = default_config();
  apply_profile(c, profile);
  return c;
}

const SweepRow& row_at(const SweepResult& r, double mu) {
  for (const SweepRow& row : r.rows) {
    if (std::abs(row.mu - mu) < 1e-9) return row;
  }
  throw std::runtime_error("mu " + fmt(mu) + " missing from sweep");
}

// 1 ---------------------------------------------------------------------------
bool histogram_arcsine() {
  const MapParams p(4.0);
  const auto start = Clock::now();
  const HistogramDensity h = estimate_invariant_density(p, generic_start(p, 20240601), 1000000, 100);
  const double elapsed = seconds_since(start);
  const double l1 = h.l1_distance(discretize_analytic_mu4(100));
  return report(1, l1 < 0.02 && elapsed < 5.0,
                "mu=4 histogram (N=1e6, W=100) vs arcsine bin masses: L1 < 0.02, runtime < 5 s",
                "L1=" + fmt(l1) + " runtime=" + fmt(elapsed) + "s");
}

// 2 ---------------------------------------------------------------------------
bool ulam_arcsine() {
  const MapParams p(4.0);
  const HistogramDensity exact = discretize_analytic_mu4(100);
  double l1 = 0.0;
  for (std::size_t s : {1000, 10000}) {
    const HistogramDensity u = ulam_invariant_density(ulam_transition_matrix(p, 100, s), 1e-13);
    const double d = u.l1_distance(exact);
    info("samples/bin=" + std::to_string(s) + " L1=" + fmt(d) + " bin0: ulam=" + fmt(u[0]) +
         " exact=" + fmt(exact[0]));
    if (s == 1000) l1 = d;
  }
  return report(2, l1 < 0.05, "mu=4 Ulam stationary vector (W=100, 1e3 samples/bin) vs arcsine: L1 < 0.05",
                "L1=" + fmt(l1));
}

// 3 ---------------------------------------------------------------------------
bool closed_form() {
  Rng rng = make_rng(3);
  double worst = 0.0;
  double worst_x0 = 0.0, worst_mu = 0.0;
  for (double mu : {2.0, 4.0}) {
    for (int k = 0; k < 100; ++k) {
      const double x0 = uniform_open01(rng);
      const Orbit o = iterate_orbit(MapParams(mu), x0, 20);
      for (unsigned n = 0; n <= 20; ++n) {
        const double d = std::abs(o.x[n] - closed_form_orbit(mu, x0, n));
        if (d > worst) {
          worst = d;
          worst_x0 = x0;
          worst_mu = mu;
        }
      }
    }
  }
  return report(3, worst <= 1e-9, "closed form vs iteration, mu in {2,4}, 100 x0 each, n <= 20: within 1e-9",
                "max|diff|=" + fmt(worst) + " (mu=" + fmt(worst_mu) + ", x0=" + fmt(worst_x0) + ")");
}

// 4 ---------------------------------------------------------------------------
bool fisher_peak() {
  const SweepConfig c = profile_config("desk");
  const auto start = Clock::now();
  const SweepResult r = run_sweep(c);
  const double elapsed = seconds_since(start);
  double top = -1.0;
  for (const SweepRow& row : r.rows) top = std::max(top, row.fisher);
  std::vector<double> argmax;
  for (const SweepRow& row : r.rows) {
    if (row.fisher == top) argmax.push_back(row.mu);
  }
  const double at_one = row_at(r, 1.0).fisher;
  info("argmax set has " + std::to_string(argmax.size()) + " grid points from mu=" +
       fmt(argmax.front()) + " to mu=" + fmt(argmax.back()));
  return report(4, r.failures() == 0 && at_one == top && elapsed < 120.0,
                "desk sweep: mu=1 attains the maximal fisher, runtime < 2 min",
                "fisher(1)=" + fmt(at_one) + " max=" + fmt(top) + " runtime=" + fmt(elapsed) + "s");
}

// 5 and 6 share the default-scale sweep -------------------------------------
double plateau_ratio(const SweepResult& r) {
  const double plateau =
      (row_at(r, 3.7).fisher + row_at(r, 3.75).fisher + row_at(r, 3.8).fisher) / 3.0;
  return row_at(r, 4.0).fisher / plateau;
}

double complexity_argmax(const SweepResult& r) {
  double best = -1.0, at = 0.0;
  for (const SweepRow& row : r.rows) {
    if (row.mu >= 3.0 && row.cr_complexity > best) {
      best = row.cr_complexity;
      at = row.mu;
    }
  }
  return at;
}

const SweepResult& default_sweep() {
  static const SweepResult r = run_sweep(default_config());
  return r;
}

bool fisher_plateau() {
  const SweepResult desk = run_sweep(profile_config("desk"));
  info("desk profile (W=100): fisher(4)/plateau = " + fmt(plateau_ratio(desk)));
  const SweepResult& r = default_sweep();
  const double ratio = plateau_ratio(r);
  return report(5, std::abs(ratio - 1.0) <= 0.2,
                "default sweep: fisher(4) within 20% of mean fisher over {3.7, 3.75, 3.8}",
                "fisher(4)=" + fmt(row_at(r, 4.0).fisher) + " ratio=" + fmt(ratio));
}

bool complexity_peak() {
  const double step = 0.05;
  const double lo = 3.56995 - step, hi = 3.82843 + step;
  const SweepResult desk = run_sweep(profile_config("desk"));
  info("desk profile (W=100): argmax C over mu >= 3 at mu=" + fmt(complexity_argmax(desk)));
  const double at = complexity_argmax(default_sweep());
  return report(6, at >= lo && at <= hi,
                "default sweep: argmax of C over mu >= 3 in [3.51995, 3.87843]", "argmax mu=" + fmt(at));
}

// 7 ---------------------------------------------------------------------------
bool convergent_temperature() {
  SweepConfig c = profile_config("desk");
  c.mu_grid = parse_mu_grid("0.5,1.5,2.5");
  c.m_members = 10000;
  c.n_max_temperature = 1000;
  const SweepResult r = run_sweep(c);
  double worst = 0.0;
  std::string measured;
  for (const SweepRow& row : r.rows) {
    worst = std::max(worst, row.ok() ? row.t_avg : INFINITY);
    measured += "t_avg(" + fmt(row.mu) + ")=" + fmt(row.t_avg) + " ";
  }
  return report(7, worst < 1e-9, "averaged temperature < 1e-9 at mu in {0.5, 1.5, 2.5} (N=1e3, M=1e4)",
                measured);
}

// 8 ---------------------------------------------------------------------------
bool chaotic_temperature() {
  SweepConfig c = default_config();
  c.mu_grid = {4.0};
  c.m_members = 100000;
  const SweepResult r = run_sweep(c);
  const double t = r.rows.front().t_avg;

  const double moments = analytic_temperature_mu4();
  // Arcsine average of (3x - 4x^2)^2 with x = sin^2(t); the weight is 2/pi.
  const double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double s) {
        const double x = std::sin(s) * std::sin(s);
        const double d = 3.0 * x - 4.0 * x * x;
        return 2.0 / std::numbers::pi * d * d;
      },
      0.0, std::numbers::pi / 2, 15, 1e-15);
  const bool oracles = std::abs(moments - 0.25) < 1e-10 && std::abs(quad - 0.25) < 1e-10 &&
                       std::abs(moments - quad) < 1e-10;
  return report(8, oracles && std::abs(t - 0.25) < 0.005,
                "mu=4 averaged temperature within 0.005 of 0.25 (M=1e5); oracles agree to 1e-10",
                "t_avg=" + fmt(t) + " moments-0.25=" + fmt(moments - 0.25) + " quadrature-0.25=" +
                    fmt(quad - 0.25));
}

// 9 ---------------------------------------------------------------------------
std::size_t increases(const EvolutionResult& r, std::size_t first, std::size_t last) {
  std::size_t count = 0;
  for (std::size_t n = first + 1; n <= last; ++n) {
    if (r.points[n].fisher - r.points[n - 1].fisher > r.frieden_tol) ++count;
  }
  return count;
}

bool frieden_relaxation() {
  SweepConfig c = profile_config("desk");
  c.m_members = 10000;
  c.w_bins = 100;
  c.evolve_steps = 50;
  c.frieden_tol = 1e-3;

  c.evolve_init = "single_bin:37";
  const EvolutionResult r = run_evolution(MapParams(4.0), c);
  const double f0 = r.points[0].fisher, f50 = r.points[50].fisher;
  const std::size_t count = increases(r, 5, 50);

  // How the counter behaves for every possible starting bin.
  std::size_t lo = SIZE_MAX, hi = 0;
  for (std::size_t k = 0; k < c.w_bins; ++k) {
    c.evolve_init = "single_bin:" + std::to_string(k);
    const std::size_t n = increases(run_evolution(MapParams(4.0), c), 5, 50);
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  info("violations over n in [5,50] across all 100 start bins: min=" + std::to_string(lo) +
       " max=" + std::to_string(hi));
  return report(9, f0 == 8.0 && f50 < 1.0 && count < 5,
                "mu=4 single-bin ensemble (M=1e4, W=100): fisher(0)=8, fisher(50) < 1, "
                "violations over [5,50] < 5",
                "fisher(0)=" + fmt(f0) + " fisher(50)=" + fmt(f50) +
                    " violations=" + std::to_string(count));
}

// 10 --------------------------------------------------------------------------
bool quantifier_identities() {
  Rng rng = make_rng(10);
  std::size_t bad = 0;
  double worst_c = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t w = 2 + static_cast<std::size_t>(uniform_open01(rng) * 999.0);
    const std::vector<double> p = testing::random_probability_vector(rng, w);
    const double i = fisher_information(p);
    std::vector<double> rev(p.rbegin(), p.rend());
    const double c = cr_complexity(p);
    const double v = variance(p);
    worst_c = std::max(worst_c, std::abs(c - i * v));
    if (!(i >= 0.0 && i <= 8.0)) ++bad;
    if (fisher_information(rev) != i || variance(rev) != v) ++bad;
    if (std::abs(c - i * v) > 1e-12) ++bad;

    std::vector<double> delta(w, 0.0);
    delta[static_cast<std::size_t>(uniform_open01(rng) * static_cast<double>(w))] = 1.0;
    if (fisher_information(delta) != 8.0) ++bad;
    const std::vector<double> uniform(w, 1.0 / static_cast<double>(w));
    if (std::abs(fisher_information(uniform) - 8.0 / static_cast<double>(w)) > 1e-12) ++bad;
  }
  return report(10, bad == 0,
                "1e3 random vectors: 0 <= I <= 8, I(delta)=8, I(uniform)=8/W, exact reversal symmetry, "
                "C = I sigma^2 to 1e-12",
                "violations=" + std::to_string(bad) + " max|C - I sigma^2|=" + fmt(worst_c));
}

// 11 --------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool reproducibility() {
  const fs::path root = fs::temp_directory_path() / ("logmap-acceptance-" + std::to_string(Clock::now().time_since_epoch().count()));
  std::vector<std::vector<fs::path>> written;
  for (unsigned workers : {1u, 4u}) {
    SweepConfig c = profile_config("desk");
    c.workers = workers;
    const fs::path dir = root / ("w" + std::to_string(workers));
    written.push_back(write_sweep_outputs(run_sweep(c), c, dir));
  }
  std::size_t compared = 0, differing = 0;
  for (const fs::path& a : written[0]) {
    // effective_config.txt records the worker count on purpose.
    if (a.extension() != ".csv") continue;
    const fs::path b = root / "w4" / a.filename();
    ++compared;
    if (!fs::exists(b) || slurp(a) != slurp(b)) {
      ++differing;
      info("differs: " + a.filename().string());
    }
  }
  fs::remove_all(root);
  return report(11, compared > 0 && differing == 0 && written[0].size() == written[1].size(),
                "desk sweeps with 1 and 4 workers write byte-identical CSVs",
                std::to_string(compared) + " CSV files compared, " + std::to_string(differing) + " differ");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<bool()>> criteria = {
      histogram_arcsine,   ulam_arcsine,           closed_form,         fisher_peak,
      fisher_plateau,      complexity_peak,        convergent_temperature, chaotic_temperature,
      frieden_relaxation,  quantifier_identities,  reproducibility,
  };
  int failed = 0;
  for (int id = 1; id <= static_cast<int>(criteria.size()); ++id) {
    if (only != 0 && id != only) continue;
    try {
      if (!criteria[id - 1]()) ++failed;
    } catch (const std::exception& e) {
      report(id, false, "raised an exception", e.what());
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
