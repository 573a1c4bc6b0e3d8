#include "shellopt/geometry/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shellopt::geometry {

namespace {

bool vertex_inside_hole(const HoleSpec& h, int i, int j) {
  return i > h.ex0 && i < h.ex1 && j > h.ey0 && j < h.ey1;
}

bool vertex_on_hole_rim(const HoleSpec& h, int i, int j) {
  const bool in_x = i >= h.ex0 && i <= h.ex1;
  const bool in_y = j >= h.ey0 && j <= h.ey1;
  if (!in_x || !in_y) return false;
  return i == h.ex0 || i == h.ex1 || j == h.ey0 || j == h.ey1;
}

bool element_in_hole(const HoleSpec& h, int ex, int ey) {
  return ex >= h.ex0 && ex < h.ex1 && ey >= h.ey0 && ey < h.ey1;
}

void validate_holes(int nx, int ny, const std::vector<HoleSpec>& holes) {
  for (const auto& h : holes) {
    if (h.ex0 >= h.ex1 || h.ey0 >= h.ey1)
      throw ConfigError("hole has empty element range");
    if (h.ex0 < 1 || h.ey0 < 1 || h.ex1 > nx - 1 || h.ey1 > ny - 1)
      throw ConfigError("hole touches the outer boundary; holes must lie strictly "
                  "inside the grid");
  }
  for (std::size_t a = 0; a + 1 < holes.size(); ++a) {
    for (std::size_t b = a + 1; b < holes.size(); ++b) {
      // compare closed vertex rectangles, so touching holes are rejected too
      const auto& p = holes[a];
      const auto& q = holes[b];
      const bool overlap_x = p.ex0 <= q.ex1 && q.ex0 <= p.ex1;
      const bool overlap_y = p.ey0 <= q.ey1 && q.ey0 <= p.ey1;
      if (overlap_x && overlap_y) throw ConfigError("holes overlap");
    }
  }
}

}  // namespace

bool ParametricMesh::is_boundary(int vid) const {
  return std::binary_search(boundary_vertices.begin(), boundary_vertices.end(),
                            vid);
}

ParametricMesh build_structured_grid(int nx, int ny,
                                     const std::vector<HoleSpec>& holes) {
  if (nx < 1 || ny < 1) throw ConfigError("grid must have at least one element per direction");
  validate_holes(nx, ny, holes);

  ParametricMesh mesh;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.holes = holes;
  mesh.grid_to_vertex.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), -1);
  mesh.grid_to_element.assign(static_cast<std::size_t>(nx) * ny, -1);

  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      bool removed = false;
      for (const auto& h : holes) removed = removed || vertex_inside_hole(h, i, j);
      if (removed) continue;
      const int vid = mesh.vertex_count();
      mesh.grid_to_vertex[static_cast<std::size_t>(j) * (nx + 1) + i] = vid;
      mesh.vertices.push_back({static_cast<double>(i) / nx,
                               static_cast<double>(j) / ny});
      mesh.vertex_grid.push_back({i, j});
      bool rim = i == 0 || i == nx || j == 0 || j == ny;
      for (const auto& h : holes) rim = rim || vertex_on_hole_rim(h, i, j);
      if (rim) mesh.boundary_vertices.push_back(vid);
    }
  }

  for (int ey = 0; ey < ny; ++ey) {
    for (int ex = 0; ex < nx; ++ex) {
      bool removed = false;
      for (const auto& h : holes) removed = removed || element_in_hole(h, ex, ey);
      if (removed) continue;
      QuadElement e;
      e.ex = ex;
      e.ey = ey;
      e.v = {mesh.vertex_id(ex, ey), mesh.vertex_id(ex + 1, ey),
             mesh.vertex_id(ex + 1, ey + 1), mesh.vertex_id(ex, ey + 1)};
      mesh.grid_to_element[static_cast<std::size_t>(ey) * nx + ex] =
          mesh.element_count();
      mesh.elements.push_back(e);
    }
  }
  return mesh;
}

int nearest_vertex(const ParametricMesh& mesh, double eta1, double eta2) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const double dx = mesh.vertices[v][0] - eta1;
    const double dy = mesh.vertices[v][1] - eta2;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {  // strict: lowest id wins ties
      best_d = d;
      best = v;
    }
  }
  if (best < 0) throw Error("mesh has no vertices");
  return best;
}

ElementPoint locate_point(const ParametricMesh& mesh, double eta1,
                          double eta2) {
  if (eta1 < 0.0 || eta1 > 1.0 || eta2 < 0.0 || eta2 > 1.0)
    throw Error("parametric point outside the unit square");
  int ex = std::min(static_cast<int>(std::floor(eta1 * mesh.nx)), mesh.nx - 1);
  int ey = std::min(static_cast<int>(std::floor(eta2 * mesh.ny)), mesh.ny - 1);
  // points on removed elements may still sit on a rim shared with a live
  // neighbour; try the adjacent candidates that contain the point
  const double s_raw = eta1 * mesh.nx;
  const double t_raw = eta2 * mesh.ny;
  for (int dy = 0; dy >= -1; --dy) {
    for (int dx = 0; dx >= -1; --dx) {
      const int cx = ex + dx;
      const int cy = ey + dy;
      if (cx < 0 || cy < 0) continue;
      if (s_raw - cx < -1e-12 || s_raw - cx > 1.0 + 1e-12) continue;
      if (t_raw - cy < -1e-12 || t_raw - cy > 1.0 + 1e-12) continue;
      const int e = mesh.element_id(cx, cy);
      if (e >= 0) {
        return {e, std::clamp(s_raw - cx, 0.0, 1.0),
                std::clamp(t_raw - cy, 0.0, 1.0)};
      }
    }
  }
  throw Error("parametric point falls inside a hole");
}

}  // namespace shellopt::geometry
