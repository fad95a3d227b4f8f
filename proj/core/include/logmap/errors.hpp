#pragma once

#include <stdexcept>
#include <string>

namespace logmap {

/// Argument outside the domain of an operation (x outside [0,1], mu outside (0,4], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sequence too short for the requested operation.
class LengthError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Probability vector that is negative somewhere or does not sum to one.
class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver stopped at its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace logmap
