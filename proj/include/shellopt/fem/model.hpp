#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "shellopt/geometry/mesh.hpp"

namespace shellopt::fem {

// Surface traction (force per unit projected plan area) applied over a
// parametric rectangle [x0,y0,x1,y1].  The plan map eta -> (Lx eta1, Ly eta2)
// is fixed, so the consistent load vector does not depend on the vertex
// geometry; shape sensitivities therefore treat it as constant.
struct LoadRegion {
  std::array<double, 4> rect{0.0, 0.0, 1.0, 1.0};
  Eigen::Vector3d traction{0.0, 0.0, 0.0};
};

struct ShellModel {
  geometry::ParametricMesh mesh;
  std::vector<Eigen::Vector3d> coords;  // vertex control positions
  double thickness = 0.0;
  double youngs_modulus = 0.0;
  double poisson = 0.0;
  std::array<double, 2> extents{1.0, 1.0};  // physical plan size (Lx, Ly)

  std::vector<LoadRegion> loads;
  std::vector<std::pair<int, Eigen::Vector3d>> point_loads;  // at vertices

  // Per-vertex fixed translation flags and the prescribed values they take.
  std::vector<std::array<bool, 3>> supports;
  std::vector<Eigen::Vector3d> prescribed;

  int dof_count() const { return 3 * mesh.vertex_count(); }
  void validate() const;  // throws on inconsistent data
};

// Flat plan-parallel model: vertex (i,j) at (Lx i/nx, Ly j/ny, 0), free
// everywhere, no loads.
ShellModel make_flat_model(geometry::ParametricMesh mesh,
                           std::array<double, 2> extents, double thickness,
                           double youngs_modulus, double poisson);

void pin_vertex(ShellModel& model, int vertex);
// edge: 0 = west (eta1=0), 1 = east, 2 = south (eta2=0), 3 = north
void pin_edge(ShellModel& model, int edge);
void pin_corners(ShellModel& model);
void pin_mid_edges(ShellModel& model);

}  // namespace shellopt::fem
