#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "shellopt/geometry/mesh.hpp"
#include "shellopt/geometry/quadrature.hpp"

namespace shellopt::geometry {

// Bicubic B-spline basis restricted to one element, expressed on the mesh
// vertices that actually influence it.  Values and parametric derivatives are
// with respect to global eta in [0,1]^2.
struct BasisEvaluation {
  std::vector<int> support;                 // distinct vertex ids
  std::vector<double> values;               // sum to one
  std::vector<std::array<double, 2>> d1;    // d/deta1, d/deta2
  std::vector<std::array<double, 3>> d2;    // d11, d22, d12
};

// Each element sees a nominal 4x4 control grid.  Controls that fall outside
// the mesh (past the outer boundary or inside a hole) are ghost points
// resolved as linear combinations of real vertices:
//
//      ghost row/column:  g = 2*c0 - c1     (reflection across the rim,
//                                            interpolatory end condition)
//      lone diagonal gap: g = cA + cB - cAB (parallelogram extrapolation)
//
// The fold matrix redistributes the 16 nominal tensor-product weights onto
// the surviving vertices; coefficient sums are preserved, so partition of
// unity and affine reproduction hold up to the rim.
struct ElementStencil {
  std::vector<int> support;
  Eigen::MatrixXd fold;  // support.size() x 16
};

ElementStencil build_element_stencil(const ParametricMesh& mesh, int element);

// point (s, t) in the reference square [0,1]^2 of the element.
BasisEvaluation element_basis(const ParametricMesh& mesh, int element,
                              double s, double t);

// Basis data at one quadrature point, aligned with an ElementStencil support.
struct BasisPointData {
  std::vector<double> values;
  std::vector<std::array<double, 2>> d1;
  std::vector<std::array<double, 3>> d2;
};

struct ElementBasisCache {
  ElementStencil stencil;
  std::vector<BasisPointData> gauss;  // one entry per quadrature point
};

// Per-element stencils and quadrature-point basis data; depends only on mesh
// topology, so one cache serves any vertex geometry.
struct MeshBasisCache {
  QuadratureRule rule;
  std::vector<ElementBasisCache> elements;
};

MeshBasisCache build_basis_cache(const ParametricMesh& mesh,
                                 const QuadratureRule& rule);

BasisPointData basis_point_data(const ParametricMesh& mesh,
                                const ElementStencil& stencil, int element,
                                double s, double t);

}  // namespace shellopt::geometry
