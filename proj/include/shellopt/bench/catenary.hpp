#pragma once

#include <array>
#include <vector>

#include "shellopt/fem/model.hpp"

namespace shellopt::bench {

// Arch-oriented catenary of given span and arc length: the optimal shape of a
// strip under a uniform vertical load, used as the strip benchmark reference.
struct CatenaryReference {
  double a = 0.0;           // catenary parameter
  double span = 0.0;        // L, endpoints at x = 0 and x = L, z = 0
  double arc_length = 0.0;  // S > L
  std::vector<std::array<double, 2>> points;  // sampled (x, z)
};

// Solves 2 a sinh(L / (2a)) = S for a by bisection (the upper bracket grows
// by doubling until it encloses the root) and samples the arch at n
// equispaced x positions.  S <= L has no catenary and throws.
CatenaryReference catenary_reference(double span, double arc_length,
                                     int samples);

// Arch height at x, nonnegative on [0, span], zero at the endpoints.
double catenary_z(const CatenaryReference& ref, double x);

// Mean squared vertical deviation of the model's centerline (the vertex row
// nearest eta2 = 0.5) from the catenary evaluated at each vertex's x.
double mse_to_catenary(const fem::ShellModel& model,
                       const CatenaryReference& ref);

}  // namespace shellopt::bench
