#pragma once

#include <string>

#include "shellopt/cli/config.hpp"

namespace shellopt::cli {

// Exit-code contract shared by every command: 0 success, 2 bad
// configuration, 3 iteration budget exhausted, 4 runtime failure,
// 5 gradient check failed.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_max_iter = 3;
inline constexpr int exit_failure = 4;
inline constexpr int exit_gradcheck = 5;

// Trains a heightfield network against the cosine target; writes
// network.txt, fit_report.csv (epoch, mse) and summary.txt into out_dir.
int cmd_fit(const FitConfig& config, const std::string& out_dir);

// Runs the full shape optimisation; writes the experiment artifacts
// (shape.obj/.vtk, history.csv, network.txt, summary.txt).
int cmd_optimize(const OptimizeConfig& config, const std::string& out_dir);

// Compares analytic directional derivatives of compliance or volume with
// Richardson-extrapolated central differences along random directions;
// writes gradcheck.csv.
int cmd_gradcheck(const GradcheckConfig& config, const std::string& out_dir);

// Maps a BCC lattice between a saved optimised skin and its vertical
// offset; writes lower/upper skin meshes, lattice.txt and summary.txt.
int cmd_lattice(const LatticeConfig& config, const std::string& out_dir);

}  // namespace shellopt::cli
