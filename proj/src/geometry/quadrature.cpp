#include "shellopt/geometry/quadrature.hpp"

#include <cmath>

#include "shellopt/errors.hpp"

namespace shellopt::geometry {

void gauss_1d(int n, std::vector<double>& points, std::vector<double>& weights) {
  // Gauss-Legendre on [-1,1], mapped to [0,1].
  std::vector<double> x, w;
  switch (n) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2:
      x = {-0.57735026918962576, 0.57735026918962576};
      w = {1.0, 1.0};
      break;
    case 3:
      x = {-0.77459666924148338, 0.0, 0.77459666924148338};
      w = {0.55555555555555556, 0.88888888888888889, 0.55555555555555556};
      break;
    case 4:
      x = {-0.86113631159405258, -0.33998104358485626, 0.33998104358485626,
           0.86113631159405258};
      w = {0.34785484513745386, 0.65214515486254614, 0.65214515486254614,
           0.34785484513745386};
      break;
    case 5:
      x = {-0.90617984593866399, -0.53846931010568309, 0.0,
           0.53846931010568309, 0.90617984593866399};
      w = {0.23692688505618909, 0.47862867049936647, 0.56888888888888889,
           0.47862867049936647, 0.23692688505618909};
      break;
    default:
      throw Error("gauss_1d supports 1..5 points");
  }
  points.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    points[i] = 0.5 * (x[i] + 1.0);
    weights[i] = 0.5 * w[i];
  }
}

QuadratureRule quadrature(int degree) {
  if (degree < 0) throw Error("quadrature degree must be non-negative");
  const int n = (degree + 2) / 2;  // smallest n with 2n-1 >= degree
  if (n > 5) throw Error("quadrature degree too high (max 9)");
  std::vector<double> p, w;
  gauss_1d(n, p, w);
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(static_cast<std::size_t>(n) * n);
  rule.weights.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({p[i], p[j]});
      rule.weights.push_back(w[i] * w[j]);
    }
  }
  return rule;
}

}  // namespace shellopt::geometry
