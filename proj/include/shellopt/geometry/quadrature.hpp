#pragma once

#include <array>
#include <vector>

namespace shellopt::geometry {

// Tensor-product Gauss rule on the reference square [0,1]^2.  Weights sum to
// the reference area (one).
struct QuadratureRule {
  int degree = 0;  // polynomial degree integrated exactly per direction
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
};

// Gauss-Legendre points/weights on [0,1]; n in [1,5].
void gauss_1d(int n, std::vector<double>& points, std::vector<double>& weights);

QuadratureRule quadrature(int degree);

inline QuadratureRule default_quadrature() { return quadrature(5); }

}  // namespace shellopt::geometry
