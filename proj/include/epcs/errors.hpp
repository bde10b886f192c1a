#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epcs {

/// Requested polynomial degree exceeds what a basis was built for.
class DegreeOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A state left the region where the system is defined (e.g. a
/// logarithmic Hamiltonian evaluated at a non-positive component).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The fixed-point iteration for the stage equations did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// A step failed during trajectory integration. Carries the 1-based index
/// of the step that failed; the message includes the underlying cause.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Invalid configuration or command-line usage.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace epcs
