#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <utility>

#include "shellopt/errors.hpp"
#include "shellopt/geometry/basis.hpp"
#include "shellopt/lattice/lattice.hpp"

using namespace shellopt;
using lattice::BccLattice;
using lattice::SkinId;

namespace {

fem::ShellModel make_curved(int nx, int ny) {
  auto model = fem::make_flat_model(geometry::build_structured_grid(nx, ny),
                                    {2.0, 1.5}, 0.05, 1e6, 0.3);
  for (int v = 0; v < model.mesh.vertex_count(); ++v) {
    const double e1 = model.mesh.vertices[v][0];
    const double e2 = model.mesh.vertices[v][1];
    model.coords[v].x() += 0.15 * e2 * e2;
    model.coords[v].y() -= 0.1 * e1 * e1 * e2;
    model.coords[v].z() = 0.4 * std::sin(2.1 * e1) + 0.25 * e1 * e2;
  }
  return model;
}

Eigen::Vector3d surface_at(const fem::ShellModel& shell, double e1,
                           double e2) {
  const auto where = geometry::locate_point(shell.mesh, e1, e2);
  const auto basis =
      geometry::element_basis(shell.mesh, where.element, where.s, where.t);
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k < basis.support.size(); ++k)
    x += basis.values[k] * shell.coords[basis.support[k]];
  return x;
}

long key_of(const Eigen::Vector3d& p, int nx, int ny, int layers) {
  // doubled integer grid so corners and centres land on exact lattice sites
  const long i = std::lround(p.x() * 2 * nx);
  const long j = std::lround(p.y() * 2 * ny);
  const long k = std::lround(p.z() * 2 * layers);
  return (k * (2 * ny + 1) + j) * (2 * nx + 1) + i;
}

}  // namespace

TEST_CASE("a single cell carries nine nodes and eight diagonals") {
  const auto g = lattice::generate_bcc_lattice(1, 1, 1);
  CHECK(g.nodes.size() == 9);
  CHECK(g.struts.size() == 8);
  CHECK(g.couplings.size() == 8);  // every corner sits on a skin face

  // the centre node joins every corner
  const Eigen::Vector3d centre(0.5, 0.5, 0.5);
  int centre_id = -1;
  for (std::size_t n = 0; n < g.nodes.size(); ++n)
    if ((g.nodes[n] - centre).norm() < 1e-15) centre_id = static_cast<int>(n);
  REQUIRE(centre_id >= 0);
  std::set<int> ends;
  for (const auto& s : g.struts) {
    CHECK((s.a == centre_id || s.b == centre_id));
    CHECK(s.a != s.b);
    ends.insert(s.a == centre_id ? s.b : s.a);
  }
  CHECK(ends.size() == 8);
}

TEST_CASE("node, strut and coupling counts follow the closed forms") {
  for (int nx = 1; nx <= 4; ++nx)
    for (int ny = 1; ny <= 4; ++ny)
      for (int layers = 1; layers <= 3; ++layers) {
        CAPTURE(nx);
        CAPTURE(ny);
        CAPTURE(layers);
        const auto g = lattice::generate_bcc_lattice(nx, ny, layers);
        const std::size_t corners = static_cast<std::size_t>(nx + 1) *
                                    (ny + 1) * (layers + 1);
        const std::size_t cells =
            static_cast<std::size_t>(nx) * ny * layers;
        CHECK(g.nodes.size() == corners + cells);
        CHECK(g.struts.size() == 8 * cells);
        CHECK(g.couplings.size() == 2 * (nx + 1) * (ny + 1));

        // brute-force duplicate scan on exact lattice sites
        std::set<long> sites;
        for (const auto& p : g.nodes)
          CHECK(sites.insert(key_of(p, nx, ny, layers)).second);
        std::set<std::pair<int, int>> edges;
        for (const auto& s : g.struts) {
          CHECK(s.a != s.b);
          CHECK(edges.insert(std::minmax(s.a, s.b)).second);
          // every strut is a half-cell body diagonal
          const Eigen::Vector3d d = g.nodes[s.a] - g.nodes[s.b];
          CHECK(std::abs(d.x()) == doctest::Approx(0.5 / nx).epsilon(1e-12));
          CHECK(std::abs(d.y()) == doctest::Approx(0.5 / ny).epsilon(1e-12));
          CHECK(std::abs(d.z()) ==
                doctest::Approx(0.5 / layers).epsilon(1e-12));
        }
      }
}

TEST_CASE("corner struts add the deduplicated cell edges") {
  const int nx = 3, ny = 2, layers = 2;
  const auto g = lattice::generate_bcc_lattice(nx, ny, layers, true);
  const std::size_t cells = static_cast<std::size_t>(nx) * ny * layers;
  const std::size_t edges_x = static_cast<std::size_t>(nx) * (ny + 1) *
                              (layers + 1);
  const std::size_t edges_y = static_cast<std::size_t>(nx + 1) * ny *
                              (layers + 1);
  const std::size_t edges_z = static_cast<std::size_t>(nx + 1) * (ny + 1) *
                              layers;
  CHECK(g.struts.size() == 8 * cells + edges_x + edges_y + edges_z);
  std::set<std::pair<int, int>> edges;
  for (const auto& s : g.struts)
    CHECK(edges.insert(std::minmax(s.a, s.b)).second);
}

TEST_CASE("face corner nodes carry skin couplings") {
  const auto g = lattice::generate_bcc_lattice(2, 3, 2);
  int lower_count = 0, upper_count = 0;
  for (const auto& c : g.couplings) {
    const auto& p = g.nodes[c.node];
    CHECK(p.x() == doctest::Approx(c.eta[0]).epsilon(1e-15));
    CHECK(p.y() == doctest::Approx(c.eta[1]).epsilon(1e-15));
    if (c.shell == SkinId::lower) {
      CHECK(p.z() == 0.0);
      ++lower_count;
    } else {
      CHECK(p.z() == 1.0);
      ++upper_count;
    }
  }
  CHECK(lower_count == 3 * 4);
  CHECK(upper_count == 3 * 4);
}

TEST_CASE("generation rejects empty grids") {
  CHECK_THROWS_AS(lattice::generate_bcc_lattice(0, 1, 1), ConfigError);
  CHECK_THROWS_AS(lattice::generate_bcc_lattice(1, 0, 1), ConfigError);
  CHECK_THROWS_AS(lattice::generate_bcc_lattice(1, 1, 0), ConfigError);
}

TEST_CASE("offset shell translates vertically and keeps the plan") {
  const auto lower = make_curved(4, 3);
  const auto upper = lattice::offset_shell(lower, 0.7);
  REQUIRE(upper.coords.size() == lower.coords.size());
  for (std::size_t v = 0; v < lower.coords.size(); ++v) {
    CHECK(upper.coords[v].x() == lower.coords[v].x());
    CHECK(upper.coords[v].y() == lower.coords[v].y());
    CHECK(upper.coords[v].z() == lower.coords[v].z() + 0.7);
  }
  const auto down = lattice::offset_shell(lower, -0.3);
  CHECK(down.coords[5].z() == lower.coords[5].z() - 0.3);
  CHECK_THROWS_AS(lattice::offset_shell(lower, 0.0), ConfigError);
}

TEST_CASE("coupled nodes sit on their shell surfaces") {
  const auto lower = make_curved(4, 4);
  const double h = 0.7;
  const auto upper = lattice::offset_shell(lower, h);
  const auto g = lattice::generate_bcc_lattice(2, 2, 2);
  nrep::TrainingConfig cfg;
  cfg.epochs = 200;
  const auto map = lattice::build_map3d_net(lower, h, {8}, cfg, 1);
  const auto geo = lattice::map_lattice(g, map.net, lower, upper, 0.04);

  REQUIRE(geo.nodes.size() == g.nodes.size());
  CHECK(geo.strut_diameter == 0.04);
  for (const auto& c : geo.couplings) {
    CHECK(c.element >= 0);
    const auto& shell = (c.shell == SkinId::lower) ? lower : upper;
    const Eigen::Vector3d want = surface_at(shell, c.eta[0], c.eta[1]);
    CHECK((geo.nodes[c.node] - want).norm() <= 1e-12);
  }

  // the skins are vertical translates, so paired couplings differ by h
  for (const auto& c : geo.couplings) {
    if (c.shell != SkinId::lower) continue;
    for (const auto& d : geo.couplings) {
      if (d.shell != SkinId::upper || d.eta != c.eta) continue;
      const Eigen::Vector3d gap = geo.nodes[d.node] - geo.nodes[c.node];
      CHECK(gap.x() == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(gap.y() == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(gap.z() == doctest::Approx(h).epsilon(1e-12));
    }
  }
}

TEST_CASE("flat parallel skins produce an affine volumetric map") {
  const auto lower = fem::make_flat_model(geometry::build_structured_grid(4, 4),
                                          {2.0, 1.0}, 0.1, 1e6, 0.3);
  const double h = 0.5;
  const auto upper = lattice::offset_shell(lower, h);
  nrep::TrainingConfig cfg;
  const auto map = lattice::build_map3d_net(lower, h, {8}, cfg, 1);

  // interior training levels reproduce the affine slab map
  double worst = 0.0;
  for (int level = 1; level <= 5; ++level) {
    const double t = level / 6.0;
    for (int v = 0; v < lower.mesh.vertex_count(); ++v) {
      Eigen::MatrixXd in(3, 1);
      in.col(0) = Eigen::Vector3d(lower.mesh.vertices[v][0],
                                  lower.mesh.vertices[v][1], t);
      const Eigen::Vector3d got = nrep::forward(map.net, in).col(0);
      const Eigen::Vector3d want(2.0 * lower.mesh.vertices[v][0],
                                 lower.mesh.vertices[v][1], t * h);
      worst = std::max(worst, (got - want).norm());
    }
  }
  CHECK(worst <= 1e-4 * h);

  // centre nodes land mid-slab through the map, corners on the skins
  const auto g = lattice::generate_bcc_lattice(2, 2, 2);
  const auto geo = lattice::map_lattice(g, map.net, lower, upper, 0.05);
  const std::size_t corner_count = 3 * 3 * 3;
  for (std::size_t n = corner_count; n < geo.nodes.size(); ++n) {
    const auto& par = g.nodes[n];
    const Eigen::Vector3d want(2.0 * par.x(), par.y(), par.z() * h);
    CHECK((geo.nodes[n] - want).norm() <= 1e-4 * h);
  }
  for (const auto& c : geo.couplings) {
    const double z0 = (c.shell == SkinId::lower) ? 0.0 : h;
    const Eigen::Vector3d want(2.0 * c.eta[0], c.eta[1], z0);
    CHECK((geo.nodes[c.node] - want).norm() <= 1e-12);
  }
}

TEST_CASE("domain corners are interpolatory for coupled nodes") {
  const auto lower = make_curved(3, 3);
  const auto upper = lattice::offset_shell(lower, 1.0);
  const auto g = lattice::generate_bcc_lattice(3, 3, 1);
  nrep::TrainingConfig cfg;
  cfg.epochs = 100;
  const auto map = lattice::build_map3d_net(lower, 1.0, {6}, cfg, 2);
  const auto geo = lattice::map_lattice(g, map.net, lower, upper, 0.05);
  for (const auto& c : geo.couplings) {
    const bool corner_eta = (c.eta[0] == 0.0 || c.eta[0] == 1.0) &&
                            (c.eta[1] == 0.0 || c.eta[1] == 1.0);
    if (!corner_eta) continue;
    const auto& shell = (c.shell == SkinId::lower) ? lower : upper;
    const int i = static_cast<int>(std::lround(c.eta[0] * 3));
    const int j = static_cast<int>(std::lround(c.eta[1] * 3));
    const int vid = shell.mesh.vertex_id(i, j);
    REQUIRE(vid >= 0);
    CHECK((geo.nodes[c.node] - shell.coords[vid]).norm() <= 1e-12);
  }
}

TEST_CASE("couplings over a hole are rejected") {
  geometry::HoleSpec hole{1, 1, 3, 3};
  auto lower = fem::make_flat_model(
      geometry::build_structured_grid(4, 4, {hole}), {1.0, 1.0}, 0.1, 1e6,
      0.3);
  const auto upper = lattice::offset_shell(lower, 0.5);
  const auto g = lattice::generate_bcc_lattice(2, 2, 1);  // eta (0.5, 0.5)
  auto net = nrep::make_network(
      {3, 4, 3}, {{nrep::Activation::sinusoidal, 1.0, M_PI / 4.0}},
      nrep::OutputMode::map3d, {1.0, 1.0});
  nrep::init_params(net, 1);
  CHECK_THROWS_AS(lattice::map_lattice(g, net, lower, upper, 0.05), Error);
}

TEST_CASE("map_lattice validates its inputs") {
  const auto lower = make_curved(3, 3);
  const auto upper = lattice::offset_shell(lower, 1.0);
  const auto g = lattice::generate_bcc_lattice(1, 1, 1);
  auto wrong_mode = nrep::make_network(
      {2, 4, 1}, {{nrep::Activation::sinusoidal, 1.0, 0.0}},
      nrep::OutputMode::heightfield, {1.0, 1.0});
  nrep::init_params(wrong_mode, 1);
  CHECK_THROWS_AS(lattice::map_lattice(g, wrong_mode, lower, upper, 0.05),
                  ConfigError);
  auto net = nrep::make_network(
      {3, 4, 3}, {{nrep::Activation::sinusoidal, 1.0, 0.0}},
      nrep::OutputMode::map3d, {1.0, 1.0});
  nrep::init_params(net, 1);
  const auto tiny = make_curved(2, 2);  // different vertex count
  CHECK_THROWS_AS(lattice::map_lattice(g, net, lower, tiny, 0.05),
                  ConfigError);
  CHECK_THROWS_AS(lattice::map_lattice(g, net, lower, upper, 0.0),
                  ConfigError);
}

TEST_CASE("volumetric map fits are deterministic") {
  const auto lower = make_curved(3, 3);
  nrep::TrainingConfig cfg;
  cfg.epochs = 150;
  const auto a = lattice::build_map3d_net(lower, 0.8, {6}, cfg, 9);
  const auto b = lattice::build_map3d_net(lower, 0.8, {6}, cfg, 9);
  CHECK(a.mse == b.mse);
  CHECK((nrep::get_params(a.net) - nrep::get_params(b.net)).norm() == 0.0);
}

TEST_CASE("lattice files round-trip through the edge list") {
  const auto lower = fem::make_flat_model(geometry::build_structured_grid(2, 2),
                                          {1.0, 1.0}, 0.1, 1e6, 0.3);
  const auto upper = lattice::offset_shell(lower, 0.25);
  const auto g = lattice::generate_bcc_lattice(2, 2, 1);
  nrep::TrainingConfig cfg;
  cfg.epochs = 100;
  const auto map = lattice::build_map3d_net(lower, 0.25, {4}, cfg, 3);
  const auto geo = lattice::map_lattice(g, map.net, lower, upper, 0.0625);

  const auto path =
      (std::filesystem::temp_directory_path() / "shellopt_lattice.txt")
          .string();
  lattice::write_lattice(geo, path);
  const auto file = lattice::parse_lattice(path);
  REQUIRE(file.nodes.size() == geo.nodes.size());
  REQUIRE(file.struts.size() == geo.struts.size());
  for (std::size_t n = 0; n < geo.nodes.size(); ++n)
    CHECK((file.nodes[n] - geo.nodes[n]).norm() <=
          1e-8 * (1.0 + geo.nodes[n].norm()));
  for (std::size_t s = 0; s < geo.struts.size(); ++s) {
    CHECK(file.struts[s].a == geo.struts[s].a);
    CHECK(file.struts[s].b == geo.struts[s].b);
    CHECK(file.diameters[s] == 0.0625);  // exactly representable
  }
  std::remove(path.c_str());
}

TEST_CASE("lattice parsing rejects malformed files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bad_tag = (dir / "shellopt_lattice_tag.txt").string();
  {
    std::ofstream out(bad_tag);
    out << "v 0 0 0\nx 1 2 3\n";
  }
  CHECK_THROWS_AS(lattice::parse_lattice(bad_tag), Error);
  const auto bad_index = (dir / "shellopt_lattice_idx.txt").string();
  {
    std::ofstream out(bad_index);
    out << "v 0 0 0\nv 1 1 1\ne 0 2 0.1\n";
  }
  CHECK_THROWS_AS(lattice::parse_lattice(bad_index), Error);
  CHECK_THROWS_AS(lattice::parse_lattice((dir / "missing_lattice.txt").string()),
                  Error);
  std::remove(bad_tag.c_str());
  std::remove(bad_index.c_str());
}
