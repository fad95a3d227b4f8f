#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "logmap/density.hpp"
#include "logmap/map.hpp"

namespace logmap {

/// Discrete Fisher information 4 * sum (sqrt p[i+1] - sqrt p[i])^2, with
/// virtual empty bins on both sides of the support (W + 1 gaps). Lies in
/// [0, 8] (clamped against rounding); a single occupied bin gives exactly 8. Summed in mirrored pairs
/// so that reversing p gives a bit-identical result.
/// Throws NormalizationError if p has negative entries or |sum p - 1| > 1e-9.
double fisher_information(std::span<const double> p);
double fisher_information(const HistogramDensity& p);

/// Variance of the bin midpoints (i + 1/2)/W under p, in x units (<= 1/4).
double variance(std::span<const double> p);
double variance(const HistogramDensity& p);

/// Cramer-Rao complexity: fisher_information(p) * variance(p).
double cr_complexity(std::span<const double> p);
double cr_complexity(const HistogramDensity& p);

struct QuantifierRecord {
  double mu = 0.0;
  double fisher = 0.0;
  double variance = 0.0;
  double cr_complexity = 0.0;
  /// Same product with the variance measured in bin units (sigma^2 W^2).
  double cr_complexity_bin_units = 0.0;
  std::size_t n_steps = 0;
  std::size_t w_bins = 0;
  std::uint64_t seed = 0;
};

QuantifierRecord quantify(const HistogramDensity& p, double mu, std::size_t n_steps,
                          std::uint64_t seed);

struct QuantifierPoint {
  std::size_t n = 0;
  double fisher = 0.0;
  double cr_complexity = 0.0;
};

/// Fisher information of an ensemble tracked step by step.
struct QuantifierSeries {
  std::vector<QuantifierPoint> points;  ///< n = 0 .. n_max
  double increase_tolerance = 1e-3;
  /// Steps n -> n+1 whose Fisher information grew by more than the tolerance.
  std::size_t fisher_increases = 0;

  /// Same count restricted to transitions n -> n+1 with first <= n < last.
  std::size_t fisher_increases_between(std::size_t first, std::size_t last) const;
};

/// Quantifiers of ensemble_density at every step 0..n_max.
QuantifierSeries quantifier_time_series(const MapParams& params, const Ensemble& ensemble,
                                        std::size_t n_max, std::size_t w_bins,
                                        double increase_tolerance = 1e-3, unsigned workers = 1);

}  // namespace logmap
