#include "shellopt/geometry/mesh_io.hpp"

#include <cstdio>
#include <fstream>

namespace shellopt::geometry {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path);
  return out;
}

}  // namespace

void write_obj(const ParametricMesh& mesh,
               const std::vector<Eigen::Vector3d>& coords,
               const std::string& path) {
  if (coords.size() != mesh.vertices.size())
    throw Error("coordinate count does not match mesh");
  auto out = open_out(path);
  for (const auto& p : coords)
    out << "v " << num(p.x()) << ' ' << num(p.y()) << ' ' << num(p.z()) << '\n';
  for (const auto& e : mesh.elements)
    out << "f " << e.v[0] + 1 << ' ' << e.v[1] + 1 << ' ' << e.v[2] + 1 << ' '
        << e.v[3] + 1 << '\n';
}

void write_vtk(const ParametricMesh& mesh,
               const std::vector<Eigen::Vector3d>& coords,
               const std::string& path,
               const std::vector<Eigen::Vector3d>* displacement) {
  if (coords.size() != mesh.vertices.size())
    throw Error("coordinate count does not match mesh");
  if (displacement && displacement->size() != coords.size())
    throw Error("displacement count does not match mesh");
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "shell surface\n";
  out << "ASCII\n";
  out << "DATASET POLYDATA\n";
  out << "POINTS " << coords.size() << " double\n";
  for (const auto& p : coords)
    out << num(p.x()) << ' ' << num(p.y()) << ' ' << num(p.z()) << '\n';
  out << "POLYGONS " << mesh.elements.size() << ' ' << mesh.elements.size() * 5
      << '\n';
  for (const auto& e : mesh.elements)
    out << "4 " << e.v[0] << ' ' << e.v[1] << ' ' << e.v[2] << ' ' << e.v[3]
        << '\n';
  if (displacement) {
    out << "POINT_DATA " << coords.size() << '\n';
    out << "VECTORS displacement double\n";
    for (const auto& d : *displacement)
      out << num(d.x()) << ' ' << num(d.y()) << ' ' << num(d.z()) << '\n';
  }
}

}  // namespace shellopt::geometry
