#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shellopt/bench/catenary.hpp"
#include "shellopt/bench/experiment.hpp"
#include "shellopt/errors.hpp"
#include "shellopt/fem/system.hpp"
#include "shellopt/nrep/network_io.hpp"

using namespace shellopt;
using bench::catenary_reference;
using bench::catenary_z;

namespace {

fem::ShellModel make_strip(int nx, int ny, std::array<double, 2> extents) {
  auto model = fem::make_flat_model(geometry::build_structured_grid(nx, ny),
                                    extents, 0.1, 7.0e7, 0.35);
  model.loads.push_back({{0.0, 0.0, 1.0, 1.0}, {0.0, 0.0, -10.0}});
  fem::pin_edge(model, 0);
  fem::pin_edge(model, 1);
  return model;
}

}  // namespace

TEST_CASE("catenary parameter solves the arc-length equation") {
  const auto ref = catenary_reference(20.0, 21.0, 41);
  CHECK(ref.a > 0.0);
  CHECK(ref.span == 20.0);
  CHECK(ref.arc_length == 21.0);
  CHECK(ref.points.size() == 41);

  const double residual =
      2.0 * ref.a * std::sinh(20.0 / (2.0 * ref.a)) - 21.0;
  CHECK(std::abs(residual) <= 1e-10);

  CHECK(std::abs(catenary_z(ref, 0.0)) <= 1e-12 * 20.0);
  CHECK(std::abs(catenary_z(ref, 20.0)) <= 1e-12 * 20.0);
  CHECK(catenary_z(ref, 10.0) > 0.0);
  for (const auto& [x, z] : ref.points) {
    CHECK(z >= -1e-12);
    CHECK(z <= catenary_z(ref, 10.0) + 1e-12);
    CHECK(z == catenary_z(ref, x));
  }
}

TEST_CASE("sampled arch has the requested arc length") {
  const double span = 20.0, arc = 21.0;
  const auto ref = catenary_reference(span, arc, 11);
  // polyline length over a dense independent sampling
  const int n = 20000;
  double length = 0.0;
  double xp = 0.0, zp = catenary_z(ref, 0.0);
  for (int i = 1; i <= n; ++i) {
    const double x = span * i / n;
    const double z = catenary_z(ref, x);
    length += std::hypot(x - xp, z - zp);
    xp = x;
    zp = z;
  }
  CHECK(length == doctest::Approx(arc).epsilon(1e-8));
}

TEST_CASE("catenary arch is symmetric about midspan") {
  const auto ref = catenary_reference(12.0, 14.0, 25);
  for (int i = 0; i <= 20; ++i) {
    const double x = 12.0 * i / 20.0;
    CHECK(catenary_z(ref, x) ==
          doctest::Approx(catenary_z(ref, 12.0 - x)).epsilon(1e-12));
  }
}

TEST_CASE("nearly taut arc gives a nearly flat arch") {
  const double span = 20.0;
  const double arc = span * (1.0 + 1e-9);
  const auto ref = catenary_reference(span, arc, 21);
  const double residual =
      2.0 * ref.a * std::sinh(span / (2.0 * ref.a)) - arc;
  CHECK(std::abs(residual) <= 1e-10 * arc);
  double zmax = 0.0;
  for (const auto& [x, z] : ref.points) zmax = std::max(zmax, z);
  CHECK(zmax > 0.0);
  CHECK(zmax <= 1e-3 * span);
}

TEST_CASE("degenerate catenary requests are rejected") {
  CHECK_THROWS_AS(catenary_reference(20.0, 20.0, 11), Error);
  CHECK_THROWS_AS(catenary_reference(20.0, 19.0, 11), Error);
  CHECK_THROWS_AS(catenary_reference(0.0, 1.0, 11), Error);
  CHECK_THROWS_AS(catenary_reference(-2.0, 1.0, 11), Error);
  CHECK_THROWS_AS(catenary_reference(20.0, 21.0, 1), Error);
}

TEST_CASE("centerline deviation vanishes on the reference itself") {
  const auto ref = catenary_reference(20.0, 22.0, 9);
  auto model = make_strip(8, 2, {20.0, 1.0});
  for (int v = 0; v < model.mesh.vertex_count(); ++v)
    model.coords[v].z() = catenary_z(ref, model.coords[v].x());
  CHECK(bench::mse_to_catenary(model, ref) == 0.0);
}

TEST_CASE("centerline deviation of a flat strip matches the arch heights") {
  const auto ref = catenary_reference(20.0, 22.0, 9);
  const auto model = make_strip(8, 2, {20.0, 1.0});
  double expected = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double z = catenary_z(ref, 20.0 * i / 8.0);
    expected += z * z;
  }
  expected /= 9.0;
  CHECK(bench::mse_to_catenary(model, ref) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("centerline picks the row nearest the middle, lower index on ties") {
  const auto ref = catenary_reference(20.0, 22.0, 9);
  // ny = 1: both rows are exactly half a unit from the middle, row 0 wins
  auto model = make_strip(8, 1, {20.0, 1.0});
  for (int v = 0; v < model.mesh.vertex_count(); ++v) {
    if (model.mesh.vertex_grid[v][1] == 0)
      model.coords[v].z() = catenary_z(ref, model.coords[v].x());
    if (model.mesh.vertex_grid[v][1] == 1) model.coords[v].z() = 7.0;
  }
  CHECK(bench::mse_to_catenary(model, ref) == 0.0);
}

TEST_CASE("experiment models carry the requested loads and supports") {
  bench::ExperimentSpec spec = bench::make_strip_spec();
  spec.nx = 6;
  spec.ny = 2;

  auto count_pinned = [](const fem::ShellModel& m) {
    int n = 0;
    for (const auto& s : m.supports)
      if (s[0] || s[1] || s[2]) ++n;
    return n;
  };

  SUBCASE("strip ends pin both short edges") {
    const auto model = bench::build_model(spec);
    CHECK(count_pinned(model) == 2 * (spec.ny + 1));
    REQUIRE(model.loads.size() == 1);
    CHECK(model.loads[0].traction.z() == -10.0);
  }
  SUBCASE("corner style pins four vertices") {
    spec.supports = bench::SupportStyle::corners;
    const auto model = bench::build_model(spec);
    CHECK(count_pinned(model) == 4);
    CHECK(model.supports[model.mesh.vertex_id(0, 0)][2]);
    CHECK(model.supports[model.mesh.vertex_id(6, 2)][2]);
  }
  SUBCASE("mid-edge style pins four vertices") {
    spec.supports = bench::SupportStyle::mid_edges;
    const auto model = bench::build_model(spec);
    CHECK(count_pinned(model) == 4);
    CHECK(model.supports[model.mesh.vertex_id(3, 0)][2]);
    CHECK(model.supports[model.mesh.vertex_id(3, 2)][2]);
  }
  SUBCASE("explicit loads replace the default") {
    spec.loads.push_back({{0.0, 0.0, 0.5, 1.0}, {0.0, 0.0, -3.0}});
    const auto model = bench::build_model(spec);
    REQUIRE(model.loads.size() == 1);
    CHECK(model.loads[0].traction.z() == -3.0);
    CHECK(model.loads[0].rect[2] == 0.5);
  }
}

TEST_CASE("a small strip experiment arches up within its volume budget") {
  bench::ExperimentSpec spec = bench::make_strip_spec();
  spec.name = "smoke";
  spec.nx = 8;
  spec.ny = 2;
  spec.extents = {10.0, 1.0};
  spec.hidden = {4};
  spec.max_iterations = 30;
  spec.seed = 1;

  const auto result = bench::run_experiment(spec);

  const double scale = 10.0;
  CHECK(result.fit_mse <= 1e-6 * scale * scale);
  CHECK(result.initial_volume > 0.0);
  CHECK(result.v_max ==
        doctest::Approx(1.05 * result.initial_volume).epsilon(1e-14));
  CHECK(result.history.records.size() >= 2);
  CHECK(result.history.status != optimizer::TerminalStatus::line_failure);

  CHECK(std::isfinite(result.final_compliance));
  CHECK(result.final_compliance < result.initial_compliance);
  CHECK(result.final_volume <= result.v_max * (1.0 + 1e-9) + 1e-12);

  // canonicalised arch opens upward with its supports resting at z = 0
  double mean_z = 0.0;
  double ground = 0.0;
  int pinned = 0;
  for (int v = 0; v < result.model.mesh.vertex_count(); ++v) {
    mean_z += result.model.coords[v].z();
    if (result.model.supports[v][2]) {
      ground += result.model.coords[v].z();
      ++pinned;
    }
  }
  REQUIRE(pinned > 0);
  CHECK(std::abs(ground / pinned) <= 1e-9);
  CHECK(mean_z >= 0.0);
  CHECK(result.displacement.size() ==
        static_cast<std::size_t>(result.model.mesh.vertex_count()));

  // mirroring the arch leaves the compliance unchanged under the pure
  // vertical load
  auto mirrored = result.net;
  mirrored.weights.back() = -mirrored.weights.back();
  mirrored.biases.back() = -mirrored.biases.back();
  Eigen::MatrixXd inputs(2, result.model.mesh.vertex_count());
  for (int v = 0; v < result.model.mesh.vertex_count(); ++v)
    inputs.col(v) = Eigen::Vector2d(result.model.mesh.vertices[v][0],
                                    result.model.mesh.vertices[v][1]);
  auto flipped = result.model;
  const Eigen::MatrixXd phys = nrep::forward(mirrored, inputs);
  for (int v = 0; v < flipped.mesh.vertex_count(); ++v)
    flipped.coords[v] = phys.col(v);
  const auto sys = fem::assemble_and_solve(flipped);
  CHECK(fem::compliance(sys) ==
        doctest::Approx(result.final_compliance).epsilon(1e-9));

  // lifting the whole arch is equally invariant: the stiffness sees only
  // coordinate differences and the load is projected onto the plan
  auto lifted = result.net;
  lifted.biases.back()[0] += 3.7;
  auto raised = result.model;
  const Eigen::MatrixXd lifted_phys = nrep::forward(lifted, inputs);
  for (int v = 0; v < raised.mesh.vertex_count(); ++v)
    raised.coords[v] = lifted_phys.col(v);
  const auto lifted_sys = fem::assemble_and_solve(raised);
  CHECK(fem::compliance(lifted_sys) ==
        doctest::Approx(result.final_compliance).epsilon(1e-9));

  // exports
  const auto dir = std::filesystem::temp_directory_path() / "shellopt_bench";
  std::filesystem::remove_all(dir);
  bench::write_outputs(result, dir.string(), {{"note", "smoke"}});
  for (const char* name :
       {"shape.obj", "shape.vtk", "history.csv", "network.txt",
        "summary.txt"}) {
    CAPTURE(name);
    CHECK(std::filesystem::file_size(dir / name) > 0);
  }

  std::ifstream csv(dir / "history.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "iter,compliance,volume,violation,step_norm");

  const auto reloaded = nrep::load_network((dir / "network.txt").string());
  CHECK(nrep::get_params(reloaded) == nrep::get_params(result.net));

  std::ifstream summary(dir / "summary.txt");
  std::stringstream text;
  text << summary.rdbuf();
  CHECK(text.str().find("status=") != std::string::npos);
  CHECK(text.str().find("v_max=") != std::string::npos);
  CHECK(text.str().find("note=smoke") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment runs are deterministic") {
  bench::ExperimentSpec spec = bench::make_strip_spec();
  spec.nx = 6;
  spec.ny = 2;
  spec.extents = {6.0, 1.0};
  spec.hidden = {3};
  spec.max_iterations = 8;
  spec.seed = 5;

  const auto a = bench::run_experiment(spec);
  const auto b = bench::run_experiment(spec);
  CHECK(a.final_compliance == b.final_compliance);
  CHECK(a.final_volume == b.final_volume);
  CHECK(nrep::get_params(a.net) == nrep::get_params(b.net));
  REQUIRE(a.history.records.size() == b.history.records.size());
  for (std::size_t i = 0; i < a.history.records.size(); ++i)
    CHECK(a.history.records[i].compliance == b.history.records[i].compliance);
}

TEST_CASE("roof and strip presets describe the benchmark geometries") {
  const auto strip = bench::make_strip_spec();
  CHECK(strip.nx == 32);
  CHECK(strip.ny == 2);
  CHECK(strip.extents[0] == 20.0);
  CHECK(strip.extents[1] == 1.0);
  CHECK(strip.volume_factor == 1.05);
  CHECK(strip.supports == bench::SupportStyle::strip_ends);

  const auto roof = bench::make_roof_spec();
  CHECK(roof.nx == 8);
  CHECK(roof.ny == 8);
  CHECK(roof.extents[0] == 20.0);
  CHECK(roof.extents[1] == 20.0);
  CHECK(roof.volume_factor == 1.2);
  CHECK(roof.supports == bench::SupportStyle::mid_edges);
}
