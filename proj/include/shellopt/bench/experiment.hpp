#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shellopt/fem/model.hpp"
#include "shellopt/nrep/network.hpp"
#include "shellopt/nrep/training.hpp"
#include "shellopt/optimizer/driver.hpp"

namespace shellopt::bench {

enum class SupportStyle { strip_ends, mid_edges, corners };

// Complete description of one shape-optimisation run: a flat rectangular
// shell, a load case, a heightfield network, and the optimiser budget.
struct ExperimentSpec {
  std::string name = "experiment";
  int nx = 32;
  int ny = 2;
  std::vector<geometry::HoleSpec> holes;
  std::array<double, 2> extents{20.0, 1.0};
  double thickness = 0.1;
  double youngs_modulus = 7.0e7;
  double poisson = 0.35;
  std::vector<fem::LoadRegion> loads;  // empty: uniform (0, 0, -10)
  SupportStyle supports = SupportStyle::strip_ends;
  double volume_factor = 1.05;  // volume bound relative to the flat shell
  std::vector<int> hidden{5, 5};
  std::vector<nrep::ActivationSpec> activations;  // empty: sin(1, pi/4) each
  nrep::TrainingConfig fit;  // initial-shape fit budget
  int max_iterations = 500;
  double rel_tol = 1e-5;
  double move_limit = 0.0;  // 0: optimizer default
  std::uint64_t seed = 1;
};

struct ExperimentResult {
  fem::ShellModel model;  // optimised geometry
  nrep::MlpNetwork net;   // canonicalised (arch opens upward)
  std::vector<Eigen::Vector3d> displacement;  // at the optimum
  optimizer::OptHistory history;
  double fit_mse = 0.0;
  double initial_compliance = 0.0;
  double final_compliance = 0.0;
  double initial_volume = 0.0;
  double final_volume = 0.0;
  double v_max = 0.0;
};

ExperimentSpec make_strip_spec();
ExperimentSpec make_roof_spec();

// Flat shell with the spec's loads and supports applied.
fem::ShellModel build_model(const ExperimentSpec& spec);

// Fits the network to the flat initial shape, optimises compliance under the
// volume bound, and canonicalises the mirror symmetry (for a pure vertical
// load the compliance of z and -z coincide; the arch-up representative is
// reported).
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Writes shape.obj, shape.vtk, history.csv, network.txt and summary.txt into
// dir (created if missing).  extra entries are appended to the summary.
void write_outputs(
    const ExperimentResult& result, const std::string& dir,
    const std::vector<std::pair<std::string, std::string>>& extra = {});

}  // namespace shellopt::bench
