#pragma once

#include <stdexcept>
#include <string>

namespace shellopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Element mid-surface degenerated (|a1 x a2| numerically zero at a
// quadrature point), so metrics and strains are undefined there.
class SingularGeometryError : public Error {
 public:
  SingularGeometryError(int element, double sqrt_a)
      : Error("singular element geometry: element " + std::to_string(element) +
              " has surface measure " + std::to_string(sqrt_a)),
        element(element),
        sqrt_a(sqrt_a) {}
  int element;
  double sqrt_a;
};

// Stiffness system not positive definite after applying supports.
class SingularSystemError : public Error {
 public:
  explicit SingularSystemError(int modes)
      : Error("singular stiffness system: " + std::to_string(modes) +
              " unconstrained mode(s); add supports"),
        null_modes(modes) {}
  int null_modes;
};

// Invalid run configuration or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace shellopt
