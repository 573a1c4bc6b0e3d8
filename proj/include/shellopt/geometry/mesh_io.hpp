#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shellopt/geometry/mesh.hpp"

namespace shellopt::geometry {

// Wavefront OBJ with quad faces; coordinates at 9 significant digits.
void write_obj(const ParametricMesh& mesh,
               const std::vector<Eigen::Vector3d>& coords,
               const std::string& path);

// Legacy ASCII VTK polydata; optional per-vertex displacement vectors.
void write_vtk(const ParametricMesh& mesh,
               const std::vector<Eigen::Vector3d>& coords,
               const std::string& path,
               const std::vector<Eigen::Vector3d>* displacement = nullptr);

}  // namespace shellopt::geometry
