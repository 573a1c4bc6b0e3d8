#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shellopt/optimizer/mma.hpp"

namespace shellopt::optimizer {

struct Evaluation {
  double compliance = 0.0;
  Eigen::VectorXd compliance_grad;
  double volume = 0.0;
  Eigen::VectorXd volume_grad;
};

// Constrained problem min J(theta) s.t. V(theta) <= v_max.  evaluate must be
// deterministic for a fixed argument; it may throw shellopt::Error for
// infeasible geometry, which the driver treats as a failed step.
struct OptProblem {
  std::function<Evaluation(const Eigen::VectorXd&)> evaluate;
  double v_max = 0.0;
  int max_iterations = 500;
  double rel_tol = 1e-6;      // relative objective change per iteration
  int settle_iterations = 5;  // consecutive small changes required to stop
  double move_limit = 0.0;    // 0: 0.2 * (initial parameter range + 1)
  MmaConfig mma;
};

enum class TerminalStatus { converged, max_iter, line_failure };

struct OptRecord {
  int iter;
  double compliance;
  double volume;
  double violation;  // max(0, V - v_max)
  double theta_norm;
  double step_norm;
};

struct OptHistory {
  std::vector<OptRecord> records;
  TerminalStatus status = TerminalStatus::max_iter;
  int best_iter = -1;  // iteration of the reported iterate; -1 if none feasible
  double best_compliance = std::numeric_limits<double>::infinity();
};

struct OptResult {
  Eigen::VectorXd theta;  // best feasible iterate (last iterate if none)
  OptHistory history;
};

OptResult run(const OptProblem& problem, const Eigen::VectorXd& theta0);

// One row per record under the header iter,compliance,volume,violation,step_norm.
void write_history_csv(const std::string& path, const OptHistory& history);

}  // namespace shellopt::optimizer
