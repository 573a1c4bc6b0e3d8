#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "shellopt/errors.hpp"

namespace shellopt::geometry {

// Rectangular block of removed elements, half-open element index ranges
// [ex0, ex1) x [ey0, ey1).  Holes must lie strictly inside the grid and may
// not overlap or touch one another.
struct HoleSpec {
  int ex0 = 0;
  int ey0 = 0;
  int ex1 = 0;
  int ey1 = 0;
};

struct QuadElement {
  std::array<int, 4> v{};  // counter-clockwise vertex ids
  int ex = 0;              // grid column
  int ey = 0;              // grid row
};

// Structured quad grid over the parametric unit square.  Vertex (i, j) sits
// at (i/nx, j/ny); vertices strictly inside a hole are dropped and the
// remaining ones are stored compactly.
struct ParametricMesh {
  int nx = 0;
  int ny = 0;
  std::vector<std::array<double, 2>> vertices;  // parametric coordinates
  std::vector<std::array<int, 2>> vertex_grid;  // (i, j) per vertex
  std::vector<QuadElement> elements;
  std::vector<int> boundary_vertices;  // sorted: outer boundary + hole rims
  std::vector<HoleSpec> holes;
  std::vector<std::int32_t> grid_to_vertex;   // (nx+1)*(ny+1), -1 if removed
  std::vector<std::int32_t> grid_to_element;  // nx*ny, -1 if removed

  int vertex_id(int i, int j) const {
    if (i < 0 || i > nx || j < 0 || j > ny) return -1;
    return grid_to_vertex[static_cast<std::size_t>(j) * (nx + 1) + i];
  }
  int element_id(int ex, int ey) const {
    if (ex < 0 || ex >= nx || ey < 0 || ey >= ny) return -1;
    return grid_to_element[static_cast<std::size_t>(ey) * nx + ex];
  }
  bool is_boundary(int vid) const;
  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
};

ParametricMesh build_structured_grid(int nx, int ny,
                                     const std::vector<HoleSpec>& holes = {});

// Vertex closest to a parametric point (lowest id wins ties).
int nearest_vertex(const ParametricMesh& mesh, double eta1, double eta2);

// Element containing a parametric point, with local coordinates in [0,1]^2.
// Throws if the point falls inside a hole.
struct ElementPoint {
  int element;
  double s;
  double t;
};
ElementPoint locate_point(const ParametricMesh& mesh, double eta1, double eta2);

}  // namespace shellopt::geometry
