#pragma once

#include <stdexcept>
#include <string>

namespace chaosent {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the open unit interval or another mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent user configuration (map, partition, parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A computation hit the limit of the density grid resolution.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Too few samples for the requested statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A structural invariant of an analysis result was violated.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_distance, std::size_t iterations)
      : Error(what), last_distance_(last_distance), iterations_(iterations) {}

  double last_distance() const noexcept { return last_distance_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double last_distance_;
  std::size_t iterations_;
};

}  // namespace chaosent
