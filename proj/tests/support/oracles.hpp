#pragma once

// Independent reference computations used to pin expected values in tests.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace oracles {

// Centre deflection of a simply supported square plate under uniform
// pressure, from the double sine series solution of the biharmonic plate
// equation; converges to the classical coefficient 0.00406 q L^4 / D.
inline double navier_plate_center(double q, double length, double bending_d,
                                  int terms = 101) {
  double sum = 0.0;
  const double pi = 3.14159265358979323846;
  for (int m = 1; m <= terms; m += 2) {
    for (int n = 1; n <= terms; n += 2) {
      const double sign = ((m + n) / 2 % 2 == 1) ? 1.0 : -1.0;
      const double mn = static_cast<double>(m) * n;
      const double k = static_cast<double>(m) * m + static_cast<double>(n) * n;
      sum += sign / (mn * k * k);
    }
  }
  return 16.0 * q * std::pow(length, 4) / (std::pow(pi, 6) * bending_d) * sum;
}

// Total external work (load times integrated deflection) of the same plate.
inline double navier_plate_compliance(double q, double length, double bending_d,
                                      int terms = 101) {
  double sum = 0.0;
  const double pi = 3.14159265358979323846;
  for (int m = 1; m <= terms; m += 2) {
    for (int n = 1; n <= terms; n += 2) {
      const double m2n2 = static_cast<double>(m) * m * n * n;
      const double k = static_cast<double>(m) * m + static_cast<double>(n) * n;
      sum += 1.0 / (m2n2 * k * k);
    }
  }
  return 64.0 * q * q * std::pow(length, 6) / (std::pow(pi, 8) * bending_d) * sum;
}

// Central difference with one Richardson step.
inline double richardson_derivative(const std::function<double(double)>& f,
                                    double h) {
  const auto central = [&](double step) {
    return (f(step) - f(-step)) / (2.0 * step);
  };
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace oracles
