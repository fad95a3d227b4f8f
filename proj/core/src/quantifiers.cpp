#include "logmap/quantifiers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logmap/errors.hpp"

namespace logmap {
namespace {

void require_normalized(std::span<const double> p) {
  if (p.empty()) throw NormalizationError("empty probability vector");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw NormalizationError("negative or NaN probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw NormalizationError("probabilities sum to " + std::to_string(total));
  }
}

// Squared gap between sqrt(p[k-1]) and sqrt(p[k]) with p[-1] = p[W] = 0.
double gap(std::span<const double> p, std::size_t k) {
  const double left = k == 0 ? 0.0 : std::sqrt(p[k - 1]);
  const double right = k == p.size() ? 0.0 : std::sqrt(p[k]);
  const double d = right - left;
  return d * d;
}

}  // namespace

double fisher_information(std::span<const double> p) {
  require_normalized(p);
  const std::size_t w = p.size();
  // Gaps k and w - k are partners under reversal of p; adding each pair
  // first makes the total independent of orientation.
  double sum = 0.0;
  std::size_t lo = 0;
  std::size_t hi = w;
  for (; lo < hi; ++lo, --hi) sum += gap(p, lo) + gap(p, hi);
  if (lo == hi) sum += gap(p, lo);
  // The exact value never exceeds 8; rounding in sqrt(p)^2 can push it an ulp over.
  return std::min(4.0 * sum, 8.0);
}

double variance(std::span<const double> p) {
  require_normalized(p);
  const std::size_t w = p.size();
  const double two_w = 2.0 * static_cast<double>(w);
  // Centered midpoints u_i = z_i - 1/2 = (2i + 1 - W) / 2W; u_{W-1-i} = -u_i exactly.
  auto u = [&](std::size_t i) {
    return (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(w)) / two_w;
  };
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0, j = w - 1; i < j; ++i, --j) {
    const double ui = u(i);
    const double uj = u(j);
    first += ui * p[i] + uj * p[j];
    second += ui * ui * p[i] + uj * uj * p[j];
  }
  // An odd middle bin has u = 0 and contributes nothing.
  const double var = second - first * first;
  return var > 0.0 ? var : 0.0;
}

double cr_complexity(std::span<const double> p) { return fisher_information(p) * variance(p); }

double fisher_information(const HistogramDensity& p) { return fisher_information(p.probabilities()); }
double variance(const HistogramDensity& p) { return variance(p.probabilities()); }
double cr_complexity(const HistogramDensity& p) { return cr_complexity(p.probabilities()); }

QuantifierRecord quantify(const HistogramDensity& p, double mu, std::size_t n_steps,
                          std::uint64_t seed) {
  QuantifierRecord r;
  r.mu = mu;
  r.fisher = fisher_information(p);
  r.variance = variance(p);
  r.cr_complexity = r.fisher * r.variance;
  const auto w = static_cast<double>(p.bins());
  r.cr_complexity_bin_units = r.fisher * (r.variance * w * w);
  r.n_steps = n_steps;
  r.w_bins = p.bins();
  r.seed = seed;
  return r;
}

std::size_t QuantifierSeries::fisher_increases_between(std::size_t first, std::size_t last) const {
  std::size_t count = 0;
  for (std::size_t n = first; n < last && n + 1 < points.size(); ++n) {
    if (points[n + 1].fisher - points[n].fisher > increase_tolerance) ++count;
  }
  return count;
}

QuantifierSeries quantifier_time_series(const MapParams& params, const Ensemble& ensemble,
                                        std::size_t n_max, std::size_t w_bins,
                                        double increase_tolerance, unsigned workers) {
  if (ensemble.size() == 0) throw DomainError("ensemble must be nonempty");
  QuantifierSeries series;
  series.increase_tolerance = increase_tolerance;
  series.points.reserve(n_max + 1);

  Ensemble state = ensemble;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) state.advance(params, 1, workers);
    const HistogramDensity p = histogram_of(state.states, w_bins, workers);
    const double fi = fisher_information(p);
    series.points.push_back({n, fi, fi * variance(p)});
  }
  series.fisher_increases = series.fisher_increases_between(0, n_max);
  return series;
}

}  // namespace logmap
