#include "logmap/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "logmap/diagnostics.hpp"
#include "logmap/errors.hpp"
#include "logmap/parallel.hpp"
#include "logmap/random.hpp"

namespace logmap {

// HistogramDensity ----------------------------------------------------------

HistogramDensity::HistogramDensity(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw NormalizationError("density needs at least one bin");
  double total = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw NormalizationError("negative or NaN bin probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw NormalizationError("bin probabilities sum to " + std::to_string(total));
  }
}

HistogramDensity HistogramDensity::from_counts(std::span<const std::uint64_t> counts,
                                               std::uint64_t total) {
  if (total == 0) throw NormalizationError("histogram with zero samples");
  std::vector<double> p(counts.size());
  const auto denom = static_cast<double>(total);
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / denom;
  return HistogramDensity(std::move(p));
}

double HistogramDensity::bin_left(std::size_t i) const noexcept {
  return static_cast<double>(i) / static_cast<double>(p_.size());
}

double HistogramDensity::bin_right(std::size_t i) const noexcept {
  return static_cast<double>(i + 1) / static_cast<double>(p_.size());
}

double HistogramDensity::midpoint(std::size_t i) const noexcept {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(p_.size());
}

double HistogramDensity::l1_distance(const HistogramDensity& other) const {
  if (other.bins() != bins()) throw DomainError("L1 distance between different bin counts");
  double d = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) d += std::abs(p_[i] - other.p_[i]);
  return d;
}

// UlamMatrix ----------------------------------------------------------------

UlamMatrix::UlamMatrix(std::vector<std::vector<Entry>> rows) {
  const std::size_t w = rows.size();
  if (w == 0) throw DomainError("Ulam matrix needs at least one bin");
  row_start_.reserve(w + 1);
  row_start_.push_back(0);
  for (std::size_t i = 0; i < w; ++i) {
    double sum = 0.0;
    for (const Entry& e : rows[i]) {
      if (e.column >= w) throw DomainError("Ulam matrix column out of range");
      if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
        throw NormalizationError("Ulam matrix entry outside [0,1]");
      }
      sum += e.weight;
      entries_.push_back(e);
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw NormalizationError("Ulam matrix row " + std::to_string(i) + " sums to " +
                               std::to_string(sum));
    }
    row_start_.push_back(entries_.size());
  }
}

UlamMatrix UlamMatrix::from_dense(const std::vector<std::vector<double>>& dense) {
  std::vector<std::vector<Entry>> rows(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i].size() != dense.size()) throw DomainError("dense Ulam matrix must be square");
    for (std::size_t j = 0; j < dense[i].size(); ++j) {
      if (dense[i][j] != 0.0) rows[i].push_back({static_cast<std::uint32_t>(j), dense[i][j]});
    }
  }
  return UlamMatrix(std::move(rows));
}

std::span<const UlamMatrix::Entry> UlamMatrix::row(std::size_t i) const {
  return std::span<const Entry>(entries_).subspan(row_start_[i], row_start_[i + 1] - row_start_[i]);
}

double UlamMatrix::operator()(std::size_t i, std::size_t j) const {
  for (const Entry& e : row(i)) {
    if (e.column == j) return e.weight;
  }
  return 0.0;
}

double UlamMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (const Entry& e : row(i)) s += e.weight;
  return s;
}

std::vector<double> UlamMatrix::apply_left(std::span<const double> p) const {
  if (p.size() != bins()) throw DomainError("vector length does not match Ulam matrix");
  std::vector<double> q(bins(), 0.0);
  for (std::size_t i = 0; i < bins(); ++i) {
    if (p[i] == 0.0) continue;
    for (const Entry& e : row(i)) q[e.column] += p[i] * e.weight;
  }
  return q;
}

// Ensemble ------------------------------------------------------------------

Ensemble Ensemble::make(std::size_t members, std::uint64_t seed, InitSpec init) {
  if (members == 0) throw DomainError("ensemble must have at least one member");
  Ensemble e;
  e.seed = seed;
  e.init = init;
  e.states.resize(members);
  Rng rng = make_rng(seed);

  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, init::Uniform>) {
          for (double& x : e.states) x = uniform_open01(rng);
        } else if constexpr (std::is_same_v<T, init::SingleBin>) {
          if (spec.w_bins == 0 || spec.bin >= spec.w_bins) {
            throw DomainError("single_bin index " + std::to_string(spec.bin) + " out of range");
          }
          const auto w = static_cast<double>(spec.w_bins);
          const auto b = static_cast<double>(spec.bin);
          for (double& x : e.states) x = (b + uniform_open01(rng)) / w;
        } else {
          if (!(spec.x0 >= 0.0 && spec.x0 <= 1.0)) {
            throw DomainError("point initial condition must lie in [0,1]");
          }
          std::fill(e.states.begin(), e.states.end(), spec.x0);
        }
      },
      init);
  return e;
}

void Ensemble::advance(const MapParams& params, std::size_t steps, unsigned workers) {
  const double mu = params.mu();
  const std::size_t n = states.size();
  parallel_for(block_count(n), workers, [&](std::size_t b) {
    const std::size_t lo = b * kBlockSize;
    const std::size_t hi = std::min(n, lo + kBlockSize);
    for (std::size_t s = 0; s < steps; ++s) {
      for (std::size_t i = lo; i < hi; ++i) states[i] = logistic(mu, states[i]);
    }
  });
}

// Density estimators ----------------------------------------------------------

HistogramDensity estimate_invariant_density(const MapParams& params, double x0,
                                            std::size_t n_steps, std::size_t w_bins,
                                            std::size_t burn_in) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("x0 must lie in [0,1]");
  if (w_bins == 0) throw DomainError("w_bins must be positive");
  if (n_steps == 0) throw DomainError("n_steps must be positive");
  if (n_steps < 10 * w_bins) {
    warn("n_steps=" + std::to_string(n_steps) + " is below 10*w_bins=" +
         std::to_string(10 * w_bins) + "; histogram is undersampled");
  }

  const double mu = params.mu();
  double x = x0;
  for (std::size_t i = 0; i < burn_in; ++i) x = logistic(mu, x);

  std::vector<std::uint64_t> counts(w_bins, 0);
  for (std::size_t t = 0; t < n_steps; ++t) {
    ++counts[bin_index(x, w_bins)];
    x = logistic(mu, x);
  }
  return HistogramDensity::from_counts(counts, n_steps);
}

double generic_start(const MapParams& params, std::uint64_t seed) {
  const double mu = params.mu();
  std::vector<double> exceptional{0.0, 1.0, 0.5, 1.0 / mu};
  if (mu >= 1.0) exceptional.push_back((mu - 1.0) / mu);
  Rng rng = make_rng(seed, {0x5354415254ull});
  for (;;) {
    const double x = uniform_open01(rng);
    const bool near = std::any_of(exceptional.begin(), exceptional.end(),
                                  [x](double e) { return std::abs(x - e) < 1e-6; });
    if (!near) return x;
  }
}

double analytic_density_mu4(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("arcsine density is singular outside (0,1), got " + std::to_string(x));
  }
  return 1.0 / (std::numbers::pi * std::sqrt(x * (1.0 - x)));
}

double arcsine_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
}

HistogramDensity discretize_analytic_mu4(std::size_t w_bins) {
  if (w_bins < 2) throw DomainError("w_bins must be at least 2");
  const auto w = static_cast<double>(w_bins);
  std::vector<double> p(w_bins);
  // Fill the lower half and mirror, so the masses are exactly symmetric.
  for (std::size_t i = 0; i < (w_bins + 1) / 2; ++i) {
    const double m = arcsine_cdf(static_cast<double>(i + 1) / w) -
                     arcsine_cdf(static_cast<double>(i) / w);
    p[i] = m;
    p[w_bins - 1 - i] = m;
  }
  if (w_bins % 2 == 1) {
    // Middle bin absorbs the remainder so the total is exact.
    double rest = 0.0;
    for (std::size_t i = 0; i < w_bins / 2; ++i) rest += 2.0 * p[i];
    p[w_bins / 2] = 1.0 - rest;
  }
  return HistogramDensity(std::move(p));
}

UlamMatrix ulam_transition_matrix(const MapParams& params, std::size_t w_bins,
                                  std::size_t samples_per_bin) {
  if (w_bins == 0) throw DomainError("w_bins must be positive");
  if (samples_per_bin < 100) throw DomainError("samples_per_bin must be at least 100");

  const double mu = params.mu();
  const auto w = static_cast<double>(w_bins);
  const auto s_count = static_cast<double>(samples_per_bin);
  std::vector<std::vector<UlamMatrix::Entry>> rows(w_bins);
  std::vector<std::pair<std::uint32_t, std::size_t>> hits;

  for (std::size_t i = 0; i < w_bins; ++i) {
    hits.clear();
    for (std::size_t s = 0; s < samples_per_bin; ++s) {
      const double x = (static_cast<double>(i) + (static_cast<double>(s) + 0.5) / s_count) / w;
      const auto j = static_cast<std::uint32_t>(bin_index(logistic(mu, x), w_bins));
      auto it = std::find_if(hits.begin(), hits.end(), [j](const auto& h) { return h.first == j; });
      if (it == hits.end()) {
        hits.emplace_back(j, 1);
      } else {
        ++it->second;
      }
    }
    std::sort(hits.begin(), hits.end());
    rows[i].reserve(hits.size());
    for (const auto& [j, c] : hits) {
      rows[i].push_back({j, static_cast<double>(c) / s_count});
    }
  }
  return UlamMatrix(std::move(rows));
}

HistogramDensity ulam_invariant_density(const UlamMatrix& matrix, double tol,
                                        std::size_t max_iters) {
  const std::size_t w = matrix.bins();
  std::vector<double> p(w, 1.0 / static_cast<double>(w));
  double residual = 0.0;

  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
  };
  normalize(p);

  for (std::size_t it = 0; it < max_iters; ++it) {
    std::vector<double> q = matrix.apply_left(p);
    residual = 0.0;
    for (std::size_t i = 0; i < w; ++i) residual += std::abs(q[i] - p[i]);
    if (residual < tol) return HistogramDensity(std::move(p));
    normalize(q);
    p = std::move(q);
  }
  throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iters) +
                             " iterations (residual " + std::to_string(residual) + ")",
                         residual);
}

HistogramDensity histogram_of(std::span<const double> states, std::size_t w_bins,
                              unsigned workers) {
  if (states.empty()) throw DomainError("histogram of an empty ensemble");
  if (w_bins == 0) throw DomainError("w_bins must be positive");
  const std::size_t blocks = block_count(states.size());
  std::vector<std::vector<std::uint64_t>> partial(blocks);
  parallel_for(blocks, workers, [&](std::size_t b) {
    auto& c = partial[b];
    c.assign(w_bins, 0);
    const std::size_t lo = b * kBlockSize;
    const std::size_t hi = std::min(states.size(), lo + kBlockSize);
    for (std::size_t i = lo; i < hi; ++i) ++c[bin_index(states[i], w_bins)];
  });
  std::vector<std::uint64_t> counts(w_bins, 0);
  for (const auto& c : partial) {
    for (std::size_t i = 0; i < w_bins; ++i) counts[i] += c[i];
  }
  return HistogramDensity::from_counts(counts, states.size());
}

HistogramDensity ensemble_density(const MapParams& params, const Ensemble& ensemble,
                                  std::size_t n, std::size_t w_bins, unsigned workers) {
  Ensemble evolved = ensemble;
  evolved.advance(params, n, workers);
  return histogram_of(evolved.states, w_bins, workers);
}

}  // namespace logmap
