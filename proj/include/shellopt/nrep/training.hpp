#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "shellopt/nrep/network.hpp"

namespace shellopt::nrep {

struct TrainingConfig {
  int epochs = 1000;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;  // used by callers that initialise before fitting
  int report_every = 0;    // record (epoch, mse) each N epochs; 0 disables
};

struct FitResult {
  MlpNetwork net;
  double mse = 0.0;
  std::vector<std::pair<int, double>> history;  // (epoch, mse) samples
};

// Mean squared error between raw network outputs and targets, averaged over
// every scalar entry of the batch.
double mse_loss(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
                const Eigen::MatrixXd& targets);

// Full-batch Adam (beta1 0.9, beta2 0.999, eps 1e-8) on the MSE of the raw
// outputs.  Deterministic; throws on a non-finite loss.
FitResult fit(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
              const Eigen::MatrixXd& targets, const TrainingConfig& config);

// Levenberg-Marquardt refinement on the exact parameter Jacobian.  Gradient
// descent stalls orders of magnitude above the attainable loss on smooth
// regression targets; a few damped Gauss-Newton steps close that gap.
// Deterministic; stops early at a local optimum or a zero loss.
FitResult polish(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& targets, int iterations = 50);

}  // namespace shellopt::nrep
