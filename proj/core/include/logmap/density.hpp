#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "logmap/map.hpp"

namespace logmap {

/// Index of the bin [i/W, (i+1)/W) holding x; x = 1 goes to the last bin.
inline std::size_t bin_index(double x, std::size_t w_bins) noexcept {
  const auto i = static_cast<std::size_t>(x * static_cast<double>(w_bins));
  return i < w_bins ? i : w_bins - 1;
}

/// Probability vector over W equal bins of [0,1]. Bin i (0-based) covers
/// [i/W, (i+1)/W) and is represented by its midpoint (i + 1/2)/W.
class HistogramDensity {
 public:
  /// Validates p >= 0 and |sum p - 1| <= 1e-12; throws NormalizationError.
  explicit HistogramDensity(std::vector<double> p);

  /// p[i] = counts[i] / total.
  static HistogramDensity from_counts(std::span<const std::uint64_t> counts, std::uint64_t total);

  std::size_t bins() const noexcept { return p_.size(); }
  std::span<const double> probabilities() const noexcept { return p_; }
  double operator[](std::size_t i) const { return p_[i]; }

  double bin_left(std::size_t i) const noexcept;
  double bin_right(std::size_t i) const noexcept;
  double midpoint(std::size_t i) const noexcept;

  /// Sum of |p - q|; throws DomainError on mismatched bin counts.
  double l1_distance(const HistogramDensity& other) const;

 private:
  std::vector<double> p_;
};

/// Row-stochastic bin transition matrix in compressed sparse row form. The
/// image of a short bin under the map spans only a handful of bins, so rows
/// are short even at W = 1e4.
class UlamMatrix {
 public:
  struct Entry {
    std::uint32_t column;
    double weight;
  };

  /// Takes per-row entry lists; validates entries in [0,1], columns in range,
  /// and every row summing to 1 within 1e-12.
  explicit UlamMatrix(std::vector<std::vector<Entry>> rows);

  static UlamMatrix from_dense(const std::vector<std::vector<double>>& dense);

  std::size_t bins() const noexcept { return row_start_.size() - 1; }
  std::span<const Entry> row(std::size_t i) const;
  double operator()(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;

  /// q = p M (push a probability vector forward one step).
  std::vector<double> apply_left(std::span<const double> p) const;

 private:
  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;
};

namespace init {
struct Uniform {};
struct SingleBin {
  std::size_t bin;
  std::size_t w_bins;
};
struct Point {
  double x0;
};
}  // namespace init

using InitSpec = std::variant<init::Uniform, init::SingleBin, init::Point>;

/// M independent initial conditions, reproducible from (seed, init, M).
/// Uniform draws from the open interval (0,1); SingleBin draws uniformly
/// inside one bin; Point places every member at x0.
struct Ensemble {
  std::vector<double> states;
  std::uint64_t seed = 0;
  InitSpec init = init::Uniform{};

  static Ensemble make(std::size_t members, std::uint64_t seed, InitSpec init);

  std::size_t size() const noexcept { return states.size(); }

  /// Applies the map `steps` times to every member, in place.
  void advance(const MapParams& params, std::size_t steps = 1, unsigned workers = 1);
};

/// Histogram of n_steps consecutive orbit points, taken after `burn_in`
/// discarded iterations from x0. Warns when n_steps < 10 * w_bins.
HistogramDensity estimate_invariant_density(const MapParams& params, double x0,
                                            std::size_t n_steps, std::size_t w_bins,
                                            std::size_t burn_in = 1000);

/// Seeded starting point in (0,1) away from the map's exceptional points
/// (0, 1, 1/2, the fixed points and their first preimages).
double generic_start(const MapParams& params, std::uint64_t seed);

/// Arcsine law 1/(pi sqrt(x(1-x))), the invariant density at mu = 4.
/// Throws DomainError unless 0 < x < 1.
double analytic_density_mu4(double x);

/// Arcsine CDF (2/pi) asin(sqrt(x)).
double arcsine_cdf(double x);

/// Exact bin masses of the arcsine law; w_bins >= 2.
HistogramDensity discretize_analytic_mu4(std::size_t w_bins);

/// Stratified Ulam matrix: samples_per_bin equispaced interior points per bin,
/// each carrying weight 1/samples_per_bin. samples_per_bin >= 100.
UlamMatrix ulam_transition_matrix(const MapParams& params, std::size_t w_bins,
                                  std::size_t samples_per_bin);

/// Left fixed vector of `matrix` by power iteration from the uniform vector.
/// Stops once the L1 change of one step drops below tol; throws
/// ConvergenceError (carrying the last residual) after max_iters.
HistogramDensity ulam_invariant_density(const UlamMatrix& matrix, double tol = 1e-12,
                                        std::size_t max_iters = 100000);

/// Histogram of the ensemble after n synchronous iterations.
HistogramDensity ensemble_density(const MapParams& params, const Ensemble& ensemble,
                                  std::size_t n, std::size_t w_bins, unsigned workers = 1);

/// Histogram of the ensemble's current states.
HistogramDensity histogram_of(std::span<const double> states, std::size_t w_bins,
                              unsigned workers = 1);

}  // namespace logmap
