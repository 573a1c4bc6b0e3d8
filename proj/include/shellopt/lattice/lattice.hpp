#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shellopt/fem/model.hpp"
#include "shellopt/nrep/network.hpp"
#include "shellopt/nrep/training.hpp"

namespace shellopt::lattice {

enum class SkinId { lower, upper };

struct Strut {
  int a = -1;
  int b = -1;
};

// Ties a lattice node to a surface point of one skin; the node position is
// the basis interpolation of the shell control points at eta instead of the
// volumetric map's value.
struct Coupling {
  int node = -1;
  SkinId shell = SkinId::lower;
  int element = -1;  // resolved against the shell mesh by map_lattice
  std::array<double, 2> eta{0.0, 0.0};
};

// Body-centred-cubic strut lattice over the parametric unit cube: corner
// nodes on a (nx+1) x (ny+1) x (layers+1) grid plus one centre node per
// cell, struts along the 8 body diagonals of every cell.
struct BccLattice {
  int nx = 0;
  int ny = 0;
  int layers = 0;
  std::vector<Eigen::Vector3d> nodes;  // unit-cube coordinates
  std::vector<Strut> struts;
  std::vector<Coupling> couplings;  // bottom and top face corner nodes
};

// corner_struts additionally adds the cell edges (shared edges appear once).
BccLattice generate_bcc_lattice(int nx, int ny, int layers,
                                bool corner_struts = false);

// Vertexwise vertical translation of the shell geometry by h (nonzero).
fem::ShellModel offset_shell(const fem::ShellModel& lower, double h);

struct Map3dFit {
  nrep::MlpNetwork net;
  double mse = 0.0;
};

// Fits a volumetric 3 -> 3 map on both skins' vertex samples plus
// interior_levels linearly interpolated levels between them.  The input is
// (eta1, eta2, t) with t = 0 on the lower skin and t = 1 on the upper.
Map3dFit build_map3d_net(const fem::ShellModel& lower, double h,
                         const std::vector<int>& hidden,
                         const nrep::TrainingConfig& config,
                         std::uint64_t seed, int interior_levels = 5);

// Physical lattice-skin geometry.
struct LatticeSkinGeometry {
  fem::ShellModel lower;
  fem::ShellModel upper;
  std::vector<Eigen::Vector3d> nodes;  // physical positions
  std::vector<Strut> struts;
  std::vector<Coupling> couplings;  // elements resolved
  double strut_diameter = 0.0;
};

// Coupled nodes are bound to their shell surface points (error if eta falls
// outside every element, e.g. inside a hole); the rest go through the map.
LatticeSkinGeometry map_lattice(const BccLattice& lattice,
                                const nrep::MlpNetwork& net,
                                const fem::ShellModel& lower,
                                const fem::ShellModel& upper,
                                double strut_diameter = 0.05);

// ASCII edge list: `v x y z` lines then `e i j d` lines (d = diameter),
// coordinates at 9 significant digits.
void write_lattice(const LatticeSkinGeometry& geometry,
                   const std::string& path);

struct LatticeFile {
  std::vector<Eigen::Vector3d> nodes;
  std::vector<Strut> struts;
  std::vector<double> diameters;
};

LatticeFile parse_lattice(const std::string& path);

}  // namespace shellopt::lattice
