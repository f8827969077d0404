#pragma once

#include <stdexcept>
#include <string>

namespace qlwave {

/// Invalid parameters or configuration (bad grid size, δ outside (0,1), ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampling grid too coarse for the field being synthesized.
class AliasingError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Non-finite multiplier values or samples.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of a diagnostic is violated.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested combination is outside what a diagnostic supports.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough usable data to fit a convergence order.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reference solution failed its self-consistency check.
class ReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trajectory produced non-finite values or exceeded the norm guard.
class DivergenceError : public std::runtime_error {
 public:
  enum class Kind { NonFinite, NormGuard };

  DivergenceError(Kind kind, long step, const std::string& what)
      : std::runtime_error(what), kind_(kind), step_(step) {}

  Kind kind() const noexcept { return kind_; }
  /// Index of the step that failed (1-based count of steps taken), -1 if unknown.
  long step() const noexcept { return step_; }

 private:
  Kind kind_;
  long step_;
};

}  // namespace qlwave
