#pragma once

#include <cstddef>
#include <vector>

namespace logmap {

/// Control parameter of the logistic map x -> mu x (1 - x).
/// Construction rejects mu outside (0, 4] (including NaN).
class MapParams {
 public:
  explicit MapParams(double mu);

  double mu() const noexcept { return mu_; }

  friend bool operator==(const MapParams&, const MapParams&) = default;

 private:
  double mu_;
};

/// Unchecked map evaluation for hot loops; callers guarantee x in [0,1].
inline double logistic(double mu, double x) noexcept { return mu * x * (1.0 - x); }

/// A finite trajectory; x.front() is the first stored (post burn-in) state.
struct Orbit {
  double mu = 0.0;
  std::vector<double> x;

  double x0() const { return x.front(); }
  std::size_t size() const noexcept { return x.size(); }
};

/// One-step displacements v[i] = x[i+1] - x[i].
struct Velocity {
  std::vector<double> v;
};

struct FixedPoint {
  double value = 0.0;
  bool stable = false;  ///< |f'(x*)| <= 1
};

/// mu x (1 - x); throws DomainError when x is outside [0,1].
double logistic_step(const MapParams& params, double x);

/// Discards `burn_in` iterations from x0, then records n_steps + 1 states.
/// The state is carried in long double and rounded on output, so entries
/// can differ in the last bits from repeated logistic_step calls.
Orbit iterate_orbit(const MapParams& params, double x0, std::size_t n_steps,
                    std::size_t burn_in = 0);

/// Exact n-th iterate for mu = 2 and mu = 4, via the conjugacies
///   mu = 2:  1 - 2 x_n = (1 - 2 x_0)^(2^n)
///   mu = 4:  x_n = sin^2(2^n asin(sqrt(x_0)))
/// Throws DomainError for any other mu or x0 outside [0,1].
double closed_form_orbit(double mu, double x0, unsigned n);

/// 0 for mu < 1, otherwise (mu - 1) / mu, with its linear stability.
FixedPoint fixed_point(const MapParams& params);

/// Throws LengthError for orbits with fewer than two states.
Velocity velocities(const Orbit& orbit);

}  // namespace logmap
