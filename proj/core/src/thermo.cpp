#include "logmap/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logmap/diagnostics.hpp"
#include "logmap/errors.hpp"
#include "logmap/parallel.hpp"

namespace logmap {
namespace {

double block_sum_sq_step(double mu, std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) {
    const double d = logistic(mu, x) - x;
    s += d * d;
  }
  return s;
}

}  // namespace

double map_temperature_step(const MapParams& params, const Ensemble& ensemble) {
  const std::size_t m = ensemble.size();
  if (m == 0) throw DomainError("map temperature of an empty ensemble");
  const std::span<const double> states(ensemble.states);
  std::vector<double> partial(block_count(m));
  for (std::size_t b = 0; b < partial.size(); ++b) {
    const std::size_t lo = b * kBlockSize;
    partial[b] = block_sum_sq_step(params.mu(), states.subspan(lo, std::min(kBlockSize, m - lo)));
  }
  return tree_sum(partial) / static_cast<double>(m);
}

TemperatureSeries temperature_series(const MapParams& params, const Ensemble& ensemble,
                                     std::size_t n_max, unsigned workers) {
  const std::size_t m = ensemble.size();
  if (m == 0) throw DomainError("map temperature of an empty ensemble");
  const double mu = params.mu();
  const std::size_t blocks = block_count(m);
  const std::size_t steps = n_max + 1;

  // partial[b * steps + n] = sum over block b of the squared step at time n.
  std::vector<double> partial(blocks * steps);
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t lo = b * kBlockSize;
    const std::size_t len = std::min(kBlockSize, m - lo);
    std::vector<double> xs(ensemble.states.begin() + static_cast<std::ptrdiff_t>(lo),
                           ensemble.states.begin() + static_cast<std::ptrdiff_t>(lo + len));
    double* out = partial.data() + b * steps;
    for (std::size_t n = 0; n < steps; ++n) {
      double s = 0.0;
      for (double& x : xs) {
        const double next = logistic(mu, x);
        const double d = next - x;
        s += d * d;
        x = next;
      }
      out[n] = s;
    }
  });

  TemperatureSeries series;
  series.mu = mu;
  series.members = m;
  series.seed = ensemble.seed;
  series.temperature.resize(steps);
  std::vector<double> column(blocks);
  for (std::size_t n = 0; n < steps; ++n) {
    for (std::size_t b = 0; b < blocks; ++b) column[b] = partial[b * steps + n];
    series.temperature[n] = tree_sum(column) / static_cast<double>(m);
  }
  return series;
}

TemperatureSeries temperature_series(const MapParams& params, std::size_t members,
                                     std::size_t n_max, std::uint64_t seed, unsigned workers) {
  return temperature_series(params, Ensemble::make(members, seed, init::Uniform{}), n_max,
                            workers);
}

TransientCutoff transient_cutoff(std::span<const double> temperature,
                                 const TransientParams& params) {
  const std::size_t w = params.window;
  if (w == 0) throw DomainError("transient window must be positive");
  if (temperature.size() <= 2 * w) {
    throw LengthError("series of length " + std::to_string(temperature.size()) +
                      " is too short for window " + std::to_string(w));
  }

  const auto wd = static_cast<double>(w);
  auto window_mean = [&](std::size_t start) {
    double s = 0.0;
    for (std::size_t i = start; i < start + w; ++i) s += temperature[i];
    return s / wd;
  };
  for (std::size_t n0 = 0; n0 + 2 * w <= temperature.size(); ++n0) {
    const double m1 = window_mean(n0);
    const double m2 = window_mean(n0 + w);
    if (std::abs(m1 - m2) <= params.tol * std::max(std::abs(m1), std::abs(m2)) + params.zero_level) {
      return {n0, false};
    }
  }

  const std::size_t n_max = temperature.size() - 1;
  warn("temperature series never settled; using transient cutoff n_max/10 = " +
       std::to_string(n_max / 10));
  return {n_max / 10, true};
}

void detect_transient(TemperatureSeries& series, const TransientParams& params) {
  const TransientCutoff cut = transient_cutoff(series.temperature, params);
  series.n0 = cut.n0;
  series.n0_fallback = cut.fallback;
}

double averaged_temperature(std::span<const double> temperature, std::size_t n0) {
  if (n0 >= temperature.size()) {
    throw DomainError("transient cutoff " + std::to_string(n0) + " beyond series end");
  }
  double s = 0.0;
  for (std::size_t n = n0; n < temperature.size(); ++n) s += temperature[n];
  return s / static_cast<double>(temperature.size() - n0);
}

double averaged_temperature(const TemperatureSeries& series) {
  if (!series.n0) throw DomainError("transient cutoff not set; call detect_transient first");
  return averaged_temperature(series.temperature, *series.n0);
}

NormalizedTemperatures normalize_sweep_temperatures(const std::map<double, double>& values) {
  if (values.empty()) throw DomainError("no temperatures to normalize");
  auto best = values.begin();
  for (auto it = values.begin(); it != values.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  const double max = best->second;
  if (!(max > 0.0)) throw DomainError("all temperatures are zero; normalization undefined");

  NormalizedTemperatures out;
  out.argmax_mu = best->first;
  for (const auto& [mu, t] : values) out.values.emplace(mu, t / max);
  return out;
}

double analytic_temperature_mu4() {
  // (x_{n+1} - x_n)^2 = (3x - 4x^2)^2 = 9x^2 - 24x^3 + 16x^4.
  auto moment = [](int k) {
    double c = 1.0;  // C(2k, k) / 4^k built up as prod (2i - 1) / (2i)
    for (int i = 1; i <= k; ++i) c *= (2.0 * i - 1.0) / (2.0 * i);
    return c;
  };
  return 9.0 * moment(2) - 24.0 * moment(3) + 16.0 * moment(4);
}

}  // namespace logmap
