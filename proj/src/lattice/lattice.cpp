#include "shellopt/lattice/lattice.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "shellopt/errors.hpp"
#include "shellopt/geometry/basis.hpp"

namespace shellopt::lattice {

namespace {

Eigen::Vector3d surface_point(const fem::ShellModel& shell,
                              std::array<double, 2> eta, int& element) {
  const auto where = geometry::locate_point(shell.mesh, eta[0], eta[1]);
  element = where.element;
  const auto basis =
      geometry::element_basis(shell.mesh, where.element, where.s, where.t);
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k < basis.support.size(); ++k)
    x += basis.values[k] * shell.coords[basis.support[k]];
  return x;
}

}  // namespace

BccLattice generate_bcc_lattice(int nx, int ny, int layers,
                                bool corner_struts) {
  if (nx < 1 || ny < 1 || layers < 1)
    throw ConfigError("lattice: cell counts must be at least 1");

  BccLattice g;
  g.nx = nx;
  g.ny = ny;
  g.layers = layers;

  auto corner = [&](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  const int corner_count = (nx + 1) * (ny + 1) * (layers + 1);
  auto centre = [&](int ci, int cj, int ck) {
    return corner_count + (ck * ny + cj) * nx + ci;
  };

  for (int k = 0; k <= layers; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        g.nodes.emplace_back(static_cast<double>(i) / nx,
                             static_cast<double>(j) / ny,
                             static_cast<double>(k) / layers);
  for (int ck = 0; ck < layers; ++ck)
    for (int cj = 0; cj < ny; ++cj)
      for (int ci = 0; ci < nx; ++ci)
        g.nodes.emplace_back((ci + 0.5) / nx, (cj + 0.5) / ny,
                             (ck + 0.5) / layers);

  for (int ck = 0; ck < layers; ++ck)
    for (int cj = 0; cj < ny; ++cj)
      for (int ci = 0; ci < nx; ++ci) {
        const int c = centre(ci, cj, ck);
        for (int dk = 0; dk <= 1; ++dk)
          for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di)
              g.struts.push_back({c, corner(ci + di, cj + dj, ck + dk)});
      }

  if (corner_struts) {
    // cell edges, each shared edge emitted once
    for (int k = 0; k <= layers; ++k)
      for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
          g.struts.push_back({corner(i, j, k), corner(i + 1, j, k)});
    for (int k = 0; k <= layers; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
          g.struts.push_back({corner(i, j, k), corner(i, j + 1, k)});
    for (int k = 0; k < layers; ++k)
      for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
          g.struts.push_back({corner(i, j, k), corner(i, j, k + 1)});
  }

  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const std::array<double, 2> eta{static_cast<double>(i) / nx,
                                      static_cast<double>(j) / ny};
      g.couplings.push_back({corner(i, j, 0), SkinId::lower, -1, eta});
      g.couplings.push_back({corner(i, j, layers), SkinId::upper, -1, eta});
    }
  return g;
}

fem::ShellModel offset_shell(const fem::ShellModel& lower, double h) {
  if (h == 0.0) throw ConfigError("offset_shell: height must be nonzero");
  fem::ShellModel upper = lower;
  for (auto& p : upper.coords) p.z() += h;
  return upper;
}

Map3dFit build_map3d_net(const fem::ShellModel& lower, double h,
                         const std::vector<int>& hidden,
                         const nrep::TrainingConfig& config,
                         std::uint64_t seed, int interior_levels) {
  if (interior_levels < 0)
    throw ConfigError("map3d: interior level count must be nonnegative");
  const auto upper = offset_shell(lower, h);  // validates h

  const int n_v = lower.mesh.vertex_count();
  const int levels = interior_levels + 2;
  Eigen::MatrixXd inputs(3, n_v * levels);
  Eigen::MatrixXd targets(3, n_v * levels);
  int col = 0;
  for (int level = 0; level < levels; ++level) {
    const double t = static_cast<double>(level) / (levels - 1);
    for (int v = 0; v < n_v; ++v, ++col) {
      inputs.col(col) = Eigen::Vector3d(lower.mesh.vertices[v][0],
                                        lower.mesh.vertices[v][1], t);
      targets.col(col) =
          (1.0 - t) * lower.coords[v] + t * upper.coords[v];
    }
  }

  std::vector<int> sizes;
  sizes.push_back(3);
  for (int hsize : hidden) sizes.push_back(hsize);
  sizes.push_back(3);
  std::vector<nrep::ActivationSpec> acts(
      hidden.size(), {nrep::Activation::sinusoidal, 1.0, M_PI / 4.0});
  auto net = nrep::make_network(sizes, acts, nrep::OutputMode::map3d,
                                {1.0, 1.0});
  nrep::init_params(net, seed);
  // The slab map is a mild distortion of an affine map, so start the hidden
  // layers in the near-linear regime; gradient descent grows weights easily
  // but shrinks them to precision very slowly.
  for (int l = 0; l + 1 < net.layer_count(); ++l) {
    net.weights[l] *= 0.05;
    net.biases[l] *= 0.05;
  }

  // Two candidates: direct Levenberg-Marquardt refinement of the near-linear
  // start, and an Adam-explored one for targets that need larger weights.
  nrep::TrainingConfig stage = config;
  if (stage.epochs <= 0) stage.epochs = 1000;
  const auto direct = nrep::polish(net, inputs, targets, 400);
  const auto adam = nrep::fit(net, inputs, targets, stage);
  const auto explored = nrep::polish(adam.net, inputs, targets, 400);
  const auto& best = (direct.mse <= explored.mse) ? direct : explored;
  Map3dFit out;
  out.net = best.net;
  out.mse = best.mse;
  return out;
}

LatticeSkinGeometry map_lattice(const BccLattice& lattice,
                                const nrep::MlpNetwork& net,
                                const fem::ShellModel& lower,
                                const fem::ShellModel& upper,
                                double strut_diameter) {
  if (net.output_mode != nrep::OutputMode::map3d)
    throw ConfigError("map_lattice: network must be a volumetric map");
  if (lower.mesh.vertex_count() != upper.mesh.vertex_count())
    throw ConfigError("map_lattice: skins disagree on vertex count");
  if (!(strut_diameter > 0.0))
    throw ConfigError("map_lattice: strut diameter must be positive");

  LatticeSkinGeometry g;
  g.lower = lower;
  g.upper = upper;
  g.struts = lattice.struts;
  g.couplings = lattice.couplings;
  g.strut_diameter = strut_diameter;

  Eigen::MatrixXd inputs(3, lattice.nodes.size());
  for (std::size_t n = 0; n < lattice.nodes.size(); ++n)
    inputs.col(static_cast<int>(n)) = lattice.nodes[n];
  const Eigen::MatrixXd mapped = nrep::forward(net, inputs);
  g.nodes.resize(lattice.nodes.size());
  for (std::size_t n = 0; n < lattice.nodes.size(); ++n)
    g.nodes[n] = mapped.col(static_cast<int>(n));

  for (auto& c : g.couplings) {
    const auto& shell = (c.shell == SkinId::lower) ? lower : upper;
    g.nodes[c.node] = surface_point(shell, c.eta, c.element);
  }
  return g;
}

void write_lattice(const LatticeSkinGeometry& geometry,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("lattice: cannot write " + path);
  out.precision(9);
  for (const auto& p : geometry.nodes)
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& s : geometry.struts)
    out << "e " << s.a << ' ' << s.b << ' ' << geometry.strut_diameter
        << '\n';
  if (!out) throw Error("lattice: write failed for " + path);
}

LatticeFile parse_lattice(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("lattice: cannot read " + path);
  LatticeFile file;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tag;
    row >> tag;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(row >> p.x() >> p.y() >> p.z()))
        throw Error("lattice: bad vertex line " + std::to_string(lineno));
      file.nodes.push_back(p);
    } else if (tag == "e") {
      Strut s;
      double d = 0.0;
      if (!(row >> s.a >> s.b >> d))
        throw Error("lattice: bad edge line " + std::to_string(lineno));
      const int n = static_cast<int>(file.nodes.size());
      if (s.a < 0 || s.b < 0 || s.a >= n || s.b >= n)
        throw Error("lattice: edge index out of range on line " +
                    std::to_string(lineno));
      file.struts.push_back(s);
      file.diameters.push_back(d);
    } else {
      throw Error("lattice: unknown tag '" + tag + "' on line " +
                  std::to_string(lineno));
    }
  }
  return file;
}

}  // namespace shellopt::lattice
