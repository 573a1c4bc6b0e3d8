#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shellopt/bench/experiment.hpp"
#include "shellopt/geometry/mesh.hpp"
#include "shellopt/nrep/training.hpp"

namespace shellopt::cli {

// Surface-fitting study: train a heightfield network against an analytic
// cosine bump sampled on a parametric grid.
struct FitConfig {
  std::array<int, 2> grid{64, 64};  // cells per direction; vertices are +1
  std::array<double, 2> extents{20.0, 20.0};
  double amplitude = 5.0;
  double frequency = 0.5;  // target z = amplitude cos(f x) cos(f y)
  std::vector<int> hidden{10, 10, 10};
  std::vector<nrep::ActivationSpec> activations;  // empty: sin(0.5, pi/4)
  nrep::TrainingConfig training;                  // epochs, lr, report cadence
  std::uint64_t seed = 0;
};

struct OptimizeConfig {
  bench::ExperimentSpec spec;
  bool report_catenary = false;  // append centerline-vs-catenary MSE
};

struct GradcheckConfig {
  bench::ExperimentSpec spec;
  int directions = 20;
  double tolerance = 1e-3;
  std::string functional = "compliance";  // or "volume"
  bool corrupt_gradient = false;  // hook: falsify the analytic value
};

// Lattice-skin generation from a saved heightfield network.
struct LatticeConfig {
  std::string network_path;
  int nx = 8;
  int ny = 8;
  std::vector<geometry::HoleSpec> holes;
  std::array<double, 2> extents{20.0, 20.0};
  double thickness = 0.1;
  double youngs_modulus = 7.0e7;
  double poisson = 0.35;
  double height = 0.5;           // skin offset, nonzero
  std::array<int, 3> cells{0, 0, 1};  // 0: one cell per 2x2 element block
  bool corner_struts = false;
  double strut_diameter = 0.05;
  std::vector<int> map_hidden{8};
  int map_epochs = 1000;
  int interior_levels = 5;
  std::uint64_t seed = 1;
};

struct RunConfig {
  std::optional<FitConfig> fit;
  std::optional<OptimizeConfig> optimize;
  std::optional<GradcheckConfig> gradcheck;
  std::optional<LatticeConfig> lattice;
};

// Parses and validates the versioned JSON run configuration.  Unknown keys,
// missing required keys, and physically inconsistent values (thickness <= 0,
// nu >= 0.5, volume bound <= 0) are ConfigErrors; nothing is computed first.
RunConfig load_config(const std::string& path);

// --seed override: replaces the seed of every section present.
void override_seed(RunConfig& config, std::uint64_t seed);

}  // namespace shellopt::cli
