#include "shellopt/fem/model.hpp"

#include <cmath>

namespace shellopt::fem {

void ShellModel::validate() const {
  const std::size_t n = mesh.vertices.size();
  if (coords.size() != n) throw Error("model: coordinate count mismatch");
  if (supports.size() != n) throw Error("model: support flag count mismatch");
  if (prescribed.size() != n) throw Error("model: prescribed value count mismatch");
  if (!(thickness > 0.0)) throw Error("model: thickness must be positive");
  if (!(youngs_modulus > 0.0)) throw Error("model: Young's modulus must be positive");
  if (!(poisson >= 0.0 && poisson < 0.5)) throw Error("model: Poisson ratio must be in [0, 0.5)");
  if (!(extents[0] > 0.0 && extents[1] > 0.0)) throw Error("model: extents must be positive");
  for (const auto& r : loads) {
    if (!(r.rect[0] <= r.rect[2] && r.rect[1] <= r.rect[3]) ||
        r.rect[0] < 0.0 || r.rect[1] < 0.0 || r.rect[2] > 1.0 || r.rect[3] > 1.0)
      throw Error("model: load region outside the parametric domain");
  }
  for (const auto& [v, force] : point_loads) {
    (void)force;
    if (v < 0 || v >= static_cast<int>(n)) throw Error("model: point load at unknown vertex");
  }
  bool any_support = false;
  for (const auto& s : supports) any_support = any_support || s[0] || s[1] || s[2];
  if (!any_support) throw Error("model: at least one support is required");
  for (const auto& p : coords)
    if (!p.allFinite()) throw Error("model: non-finite vertex coordinate");
}

ShellModel make_flat_model(geometry::ParametricMesh mesh,
                           std::array<double, 2> extents, double thickness,
                           double youngs_modulus, double poisson) {
  ShellModel m;
  m.mesh = std::move(mesh);
  m.extents = extents;
  m.thickness = thickness;
  m.youngs_modulus = youngs_modulus;
  m.poisson = poisson;
  const int n = m.mesh.vertex_count();
  m.coords.resize(n);
  for (int v = 0; v < n; ++v)
    m.coords[v] = {extents[0] * m.mesh.vertices[v][0],
                   extents[1] * m.mesh.vertices[v][1], 0.0};
  m.supports.assign(n, {false, false, false});
  m.prescribed.assign(n, Eigen::Vector3d::Zero());
  return m;
}

void pin_vertex(ShellModel& model, int vertex) {
  if (vertex < 0 || vertex >= model.mesh.vertex_count())
    throw Error("pin_vertex: unknown vertex");
  model.supports[vertex] = {true, true, true};
}

void pin_edge(ShellModel& model, int edge) {
  const auto& mesh = model.mesh;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const auto [i, j] = mesh.vertex_grid[v];
    const bool on = (edge == 0 && i == 0) || (edge == 1 && i == mesh.nx) ||
                    (edge == 2 && j == 0) || (edge == 3 && j == mesh.ny);
    if (on) model.supports[v] = {true, true, true};
  }
}

void pin_corners(ShellModel& model) {
  const auto& mesh = model.mesh;
  for (auto [i, j] : {std::pair{0, 0}, {mesh.nx, 0}, {mesh.nx, mesh.ny}, {0, mesh.ny}}) {
    const int v = mesh.vertex_id(i, j);
    if (v >= 0) model.supports[v] = {true, true, true};
  }
}

void pin_mid_edges(ShellModel& model) {
  for (auto [e1, e2] : {std::pair{0.5, 0.0}, {1.0, 0.5}, {0.5, 1.0}, {0.0, 0.5}})
    pin_vertex(model, geometry::nearest_vertex(model.mesh, e1, e2));
}

}  // namespace shellopt::fem
