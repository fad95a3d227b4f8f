#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "logmap/density.hpp"
#include "logmap/map.hpp"

namespace logmap {

/// Map temperature T(N) = (1/M) sum_j (x_{N+1}^(j) - x_N^(j))^2 over an
/// ensemble, with the dimensionless convention m v0^2 / (k_B T0) = 1.
struct TemperatureSeries {
  double mu = 0.0;
  std::vector<double> temperature;  ///< indexed by step N = 0 .. n_max
  std::size_t members = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> n0;  ///< transient cutoff, once detected
  bool n0_fallback = false;       ///< cutoff came from the n_max/10 fallback
};

/// Mean squared one-step displacement of the ensemble's current states.
/// Summed per fixed block and combined with tree_sum, so the result matches
/// the corresponding entry of temperature_series bit for bit.
double map_temperature_step(const MapParams& params, const Ensemble& ensemble);

/// T(N) for N = 0..n_max from the given ensemble.
TemperatureSeries temperature_series(const MapParams& params, const Ensemble& ensemble,
                                     std::size_t n_max, unsigned workers = 1);

/// T(N) for N = 0..n_max from a seeded uniform ensemble on (0,1).
TemperatureSeries temperature_series(const MapParams& params, std::size_t members,
                                     std::size_t n_max, std::uint64_t seed,
                                     unsigned workers = 1);

struct TransientParams {
  std::size_t window = 50;
  double tol = 0.01;         ///< relative change allowed between adjacent windows
  double zero_level = 1e-12; ///< absolute slack, so a series decayed to ~0 counts as settled
};

struct TransientCutoff {
  std::size_t n0 = 0;
  bool fallback = false;
};

/// Smallest N0 such that the means of T over [N0, N0+w) and [N0+w, N0+2w)
/// differ by at most tol * max(|m1|, |m2|) + zero_level. Falls back to
/// n_max/10 (flagged, with a warning) when no such N0 exists.
/// Throws LengthError unless the series is longer than 2 * window.
TransientCutoff transient_cutoff(std::span<const double> temperature,
                                 const TransientParams& params = {});

/// Detects and stores n0 on the series.
void detect_transient(TemperatureSeries& series, const TransientParams& params = {});

/// Arithmetic mean of T[N] for N >= n0.
double averaged_temperature(std::span<const double> temperature, std::size_t n0);

/// Requires series.n0 to be set; throws DomainError otherwise.
double averaged_temperature(const TemperatureSeries& series);

struct NormalizedTemperatures {
  std::map<double, double> values;
  double argmax_mu = 0.0;
};

/// Divides every value by the sweep maximum. Throws DomainError when the map
/// is empty or the maximum is zero.
NormalizedTemperatures normalize_sweep_temperatures(const std::map<double, double>& values);

/// Expected (x_{n+1} - x_n)^2 under the arcsine law, from its moments
/// E[x^k] = C(2k, k) / 4^k. Equals 1/4.
double analytic_temperature_mu4();

}  // namespace logmap
