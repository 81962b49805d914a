#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace caputo_sirs {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series, quadrature or asymptotic switch could not reach tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-facing configuration; `field()` names the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A caller broke an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The integrator produced an overflowed or NaN state.
class NonFiniteStateError : public std::runtime_error {
 public:
  explicit NonFiniteStateError(std::size_t step)
      : std::runtime_error("non-finite state at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// An internal consistency check failed (should be unreachable for valid input).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An output location could not be created or written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace caputo_sirs
