#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdeproj {

/// Argument outside an operation's domain (bad shape, non-positive step, ...).
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested multi-index or operator order is not implemented.
class UnsupportedOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state or coefficient evaluation became non-finite during integration.
class NumericalBlowupError : public std::runtime_error {
 public:
  NumericalBlowupError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// The induced metric of an embedding is (numerically) singular.
class SingularMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A density-family state cannot be represented (underflow, sigma collapse).
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sdeproj
