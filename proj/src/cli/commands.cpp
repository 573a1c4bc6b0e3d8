#include "shellopt/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shellopt/bench/catenary.hpp"
#include "shellopt/bench/experiment.hpp"
#include "shellopt/errors.hpp"
#include "shellopt/fem/system.hpp"
#include "shellopt/geometry/basis.hpp"
#include "shellopt/geometry/mesh_io.hpp"
#include "shellopt/lattice/lattice.hpp"
#include "shellopt/nrep/network_io.hpp"
#include "shellopt/sensitivity/gradients.hpp"

namespace shellopt::cli {

namespace {

std::string fmt(double value) {
  std::ostringstream out;
  out << std::setprecision(12) << value;
  return out.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << std::setprecision(12);
  return out;
}

Eigen::MatrixXd vertex_inputs(const geometry::ParametricMesh& mesh) {
  Eigen::MatrixXd inputs(2, mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    inputs(0, v) = mesh.vertices[v][0];
    inputs(1, v) = mesh.vertices[v][1];
  }
  return inputs;
}

void apply_network(const nrep::MlpNetwork& net, const Eigen::MatrixXd& inputs,
                   fem::ShellModel& model) {
  const Eigen::MatrixXd coords = nrep::forward(net, inputs);
  for (int v = 0; v < model.mesh.vertex_count(); ++v)
    model.coords[v] = coords.col(v);
}

// Centerline arc length and deviation from the catenary of equal arc
// length.  Degenerate (taut or sagging-free) centerlines fall back to the
// flat-segment limit, whose reference height is zero.
std::vector<std::pair<std::string, std::string>> catenary_report(
    const fem::ShellModel& model) {
  const auto& mesh = model.mesh;
  int row = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= mesh.ny; ++j) {
    const double d = std::abs(static_cast<double>(j) / mesh.ny - 0.5);
    if (d < best) {
      best = d;
      row = j;
    }
  }
  std::vector<std::array<double, 2>> line;
  for (int i = 0; i <= mesh.nx; ++i) {
    const int v = mesh.vertex_id(i, row);
    if (v < 0) return {{"mse_to_catenary", "unavailable (holed centerline)"}};
    line.push_back({model.coords[v].x(), model.coords[v].z()});
  }
  double arc = 0.0;
  for (std::size_t k = 1; k < line.size(); ++k)
    arc += std::hypot(line[k][0] - line[k - 1][0], line[k][1] - line[k - 1][1]);
  const double span = model.extents[0];
  if (arc > span * (1.0 + 1e-12)) {
    const auto ref = bench::catenary_reference(span, arc, 4 * mesh.nx + 1);
    return {{"mse_to_catenary", fmt(bench::mse_to_catenary(model, ref))},
            {"centerline_arc_length", fmt(arc)},
            {"catenary_parameter", fmt(ref.a)}};
  }
  double mse = 0.0;
  for (const auto& p : line) mse += p[1] * p[1];
  mse /= static_cast<double>(line.size());
  return {{"mse_to_catenary", fmt(mse)}, {"centerline_arc_length", fmt(arc)}};
}

}  // namespace

int cmd_fit(const FitConfig& config, const std::string& out_dir) {
  const int gx = config.grid[0];
  const int gy = config.grid[1];
  const int count = (gx + 1) * (gy + 1);
  Eigen::MatrixXd inputs(2, count);
  Eigen::MatrixXd targets(1, count);
  for (int j = 0; j <= gy; ++j)
    for (int i = 0; i <= gx; ++i) {
      const int p = j * (gx + 1) + i;
      const double e1 = static_cast<double>(i) / gx;
      const double e2 = static_cast<double>(j) / gy;
      inputs(0, p) = e1;
      inputs(1, p) = e2;
      targets(0, p) = config.amplitude *
                      std::cos(config.frequency * config.extents[0] * e1) *
                      std::cos(config.frequency * config.extents[1] * e2);
    }

  std::vector<int> sizes{2};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(1);
  auto activations = config.activations;
  if (activations.empty())
    activations.assign(config.hidden.size(),
                       {nrep::Activation::sinusoidal, 0.5, M_PI / 4.0});
  auto net = nrep::make_network(sizes, activations,
                                nrep::OutputMode::heightfield, config.extents);
  nrep::init_params(net, config.seed);

  if (config.training.learning_rate == 0.0)
    std::cerr << "warning: learning rate is 0, parameters stay unchanged\n";
  const auto result = nrep::fit(net, inputs, targets, config.training);

  ensure_dir(out_dir);
  nrep::save_network(result.net, out_dir + "/network.txt");
  {
    auto report = open_out(out_dir + "/fit_report.csv");
    report << "epoch,mse\n";
    if (result.history.empty())
      report << config.training.epochs << ',' << result.mse << '\n';
    for (const auto& [epoch, mse] : result.history)
      report << epoch << ',' << mse << '\n';
  }
  {
    auto summary = open_out(out_dir + "/summary.txt");
    summary << "status=ok\n";
    summary << "epochs=" << config.training.epochs << '\n';
    summary << "learning_rate=" << config.training.learning_rate << '\n';
    summary << "mse=" << result.mse << '\n';
    summary << "params=" << nrep::count_params(result.net) << '\n';
  }
  return exit_ok;
}

int cmd_optimize(const OptimizeConfig& config, const std::string& out_dir) {
  const auto result = bench::run_experiment(config.spec);
  std::vector<std::pair<std::string, std::string>> extra;
  if (config.report_catenary) extra = catenary_report(result.model);
  ensure_dir(out_dir);
  bench::write_outputs(result, out_dir, extra);
  switch (result.history.status) {
    case optimizer::TerminalStatus::converged:
      return exit_ok;
    case optimizer::TerminalStatus::max_iter:
      return exit_max_iter;
    case optimizer::TerminalStatus::line_failure:
      return exit_failure;
  }
  return exit_failure;
}

int cmd_gradcheck(const GradcheckConfig& config, const std::string& out_dir) {
  auto model = bench::build_model(config.spec);
  const auto cache =
      geometry::build_basis_cache(model.mesh, geometry::default_quadrature());
  const Eigen::MatrixXd inputs = vertex_inputs(model.mesh);

  std::vector<int> sizes{2};
  sizes.insert(sizes.end(), config.spec.hidden.begin(),
               config.spec.hidden.end());
  sizes.push_back(1);
  auto activations = config.spec.activations;
  if (activations.empty())
    activations.assign(config.spec.hidden.size(),
                       {nrep::Activation::sinusoidal, 1.0, M_PI / 4.0});
  auto net = nrep::make_network(sizes, activations,
                                nrep::OutputMode::heightfield,
                                config.spec.extents);
  nrep::init_params(net, config.spec.seed);
  const Eigen::VectorXd theta0 = nrep::get_params(net);
  const bool want_compliance = config.functional == "compliance";

  const auto evaluate = [&](const Eigen::VectorXd& theta) {
    nrep::set_params(net, theta);
    apply_network(net, inputs, model);
    if (want_compliance)
      return fem::compliance(fem::assemble_and_solve(model, cache));
    return fem::area_and_volume(model, cache).second;
  };

  nrep::set_params(net, theta0);
  apply_network(net, inputs, model);
  const auto system = fem::assemble_and_solve(model, cache);
  const auto dJ_dx = sensitivity::compliance_gradient_x(model, cache, system);
  const auto dA_dx = sensitivity::area_gradient_x(model, cache);
  const auto jacobian = nrep::jacobian_wrt_params(net, inputs);
  const auto bundle = sensitivity::chain_to_theta(
      dJ_dx, dA_dx, model.thickness, jacobian, net.output_mode);
  const Eigen::VectorXd& grad =
      want_compliance ? bundle.dJ_dtheta : bundle.dV_dtheta;

  std::mt19937_64 rng(config.spec.seed + 0x517cc1b727220a95ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double step = 1e-4 * (1.0 + theta0.lpNorm<Eigen::Infinity>());

  ensure_dir(out_dir);
  auto report = open_out(out_dir + "/gradcheck.csv");
  report << std::setprecision(17)
         << "direction,analytic,finite_difference,relative_error\n";
  double worst = 0.0;
  for (int d = 0; d < config.directions; ++d) {
    Eigen::VectorXd dir(theta0.size());
    for (int k = 0; k < dir.size(); ++k) dir[k] = gauss(rng);
    dir.normalize();
    double analytic = grad.dot(dir);
    if (config.corrupt_gradient)
      analytic = 1.5 * analytic + 0.1 * (1.0 + std::abs(analytic));
    // Richardson extrapolation of the central difference: the h^2 terms of
    // D(h) and D(h/2) cancel in (4 D(h/2) - D(h)) / 3.
    const auto central = [&](double h) {
      return (evaluate(theta0 + h * dir) - evaluate(theta0 - h * dir)) /
             (2.0 * h);
    };
    const double fd = (4.0 * central(step / 2.0) - central(step)) / 3.0;
    const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-30});
    const double rel = std::abs(analytic - fd) / scale;
    worst = std::max(worst, rel);
    report << d << ',' << analytic << ',' << fd << ',' << rel << '\n';
  }
  report.close();

  const bool ok = worst <= config.tolerance;
  auto summary = open_out(out_dir + "/summary.txt");
  summary << "status=" << (ok ? "ok" : "failed") << '\n';
  summary << "functional=" << config.functional << '\n';
  summary << "directions=" << config.directions << '\n';
  summary << "max_relative_error=" << worst << '\n';
  summary << "tolerance=" << config.tolerance << '\n';
  return ok ? exit_ok : exit_gradcheck;
}

int cmd_lattice(const LatticeConfig& config, const std::string& out_dir) {
  if (!std::filesystem::exists(config.network_path))
    throw ConfigError("lattice: network file not found: " +
                      config.network_path);
  nrep::MlpNetwork net = [&] {
    try {
      return nrep::load_network(config.network_path);
    } catch (const Error& err) {
      throw ConfigError("lattice: cannot read network: " +
                        std::string(err.what()));
    }
  }();
  if (net.output_mode == nrep::OutputMode::map3d)
    throw ConfigError("lattice: network must map a surface, not a volume");
  for (int k = 0; k < 2; ++k)
    if (std::abs(net.extents[k] - config.extents[k]) >
        1e-9 * std::max(1.0, std::abs(config.extents[k])))
      throw ConfigError("lattice: network extents disagree with the config");

  auto lower = fem::make_flat_model(
      geometry::build_structured_grid(config.nx, config.ny, config.holes),
      config.extents, config.thickness, config.youngs_modulus,
      config.poisson);
  const Eigen::MatrixXd inputs = vertex_inputs(lower.mesh);
  apply_network(net, inputs, lower);
  const auto upper = lattice::offset_shell(lower, config.height);

  const int cx = config.cells[0] > 0 ? config.cells[0]
                                     : std::max(1, config.nx / 2);
  const int cy = config.cells[1] > 0 ? config.cells[1]
                                     : std::max(1, config.ny / 2);
  const int cz = config.cells[2];
  const auto grid =
      lattice::generate_bcc_lattice(cx, cy, cz, config.corner_struts);

  nrep::TrainingConfig map_cfg;
  map_cfg.epochs = config.map_epochs;
  const auto map = lattice::build_map3d_net(lower, config.height,
                                            config.map_hidden, map_cfg,
                                            config.seed,
                                            config.interior_levels);
  const auto geo = lattice::map_lattice(grid, map.net, lower, upper,
                                        config.strut_diameter);

  ensure_dir(out_dir);
  geometry::write_obj(lower.mesh, lower.coords, out_dir + "/lower.obj");
  geometry::write_obj(upper.mesh, upper.coords, out_dir + "/upper.obj");
  lattice::write_lattice(geo, out_dir + "/lattice.txt");
  auto summary = open_out(out_dir + "/summary.txt");
  summary << "status=ok\n";
  summary << "nodes=" << geo.nodes.size() << '\n';
  summary << "struts=" << geo.struts.size() << '\n';
  summary << "couplings=" << geo.couplings.size() << '\n';
  summary << "cells_x=" << cx << '\n';
  summary << "cells_y=" << cy << '\n';
  summary << "cells_z=" << cz << '\n';
  summary << "map_mse=" << map.mse << '\n';
  summary << "height=" << config.height << '\n';
  summary << "strut_diameter=" << config.strut_diameter << '\n';
  return exit_ok;
}

}  // namespace shellopt::cli
