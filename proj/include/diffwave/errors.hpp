#pragma once

#include <stdexcept>
#include <string>

namespace diffwave {

/// Argument outside the domain of a function (non-positive volume, negative time, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested feature is not provided (e.g. pressure derivative of order > 3).
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: divergent integral, Newton stall, lost positivity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// v dropped to zero or below. Carries the location so callers can report it.
class PositivityError : public NumericalError {
 public:
  PositivityError(const std::string& what, long cell, double time)
      : NumericalError(what), cell_(cell), time_(time) {}
  long cell() const noexcept { return cell_; }
  double time() const noexcept { return time_; }

 private:
  long cell_;
  double time_;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace diffwave
