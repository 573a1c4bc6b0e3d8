#pragma once

#include <Eigen/Dense>

namespace shellopt::optimizer {

struct MmaConfig {
  double asy_init = 0.5;    // initial asymptote offset, × reference span
  double asy_shrink = 0.7;  // contraction on oscillation
  double asy_grow = 1.2;    // expansion on monotone progress
  double raa0 = 1e-5;       // convexity floor in the separable approximation
};

// Method of moving asymptotes for one objective and a single inequality
// constraint g(x) <= 0.  The caller owns the outer loop; step() proposes the
// next iterate from values and gradients at the current one.  The separable
// convex subproblem is solved exactly through its scalar dual.
class MmaSolver {
 public:
  // span: reference trust region width per variable (also the default move
  // limit); bounds may further restrict iterates.
  MmaSolver(int n, double span, MmaConfig config = {});

  void set_bounds(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

  // x: current point; j/dj: objective and gradient; g/dg: constraint value
  // (already offset so feasibility is g <= 0) and gradient.
  Eigen::VectorXd step(const Eigen::VectorXd& x, double j,
                       const Eigen::VectorXd& dj, double g,
                       const Eigen::VectorXd& dg);

  int iteration() const { return iter_; }

 private:
  int n_;
  double span_;
  MmaConfig cfg_;
  int iter_ = 0;
  Eigen::VectorXd xold1_, xold2_, low_, upp_;
  Eigen::VectorXd lower_, upper_;
};

}  // namespace shellopt::optimizer
