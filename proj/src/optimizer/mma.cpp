#include "shellopt/optimizer/mma.hpp"

#include <cmath>
#include <limits>

#include "shellopt/errors.hpp"

namespace shellopt::optimizer {

MmaSolver::MmaSolver(int n, double span, MmaConfig config)
    : n_(n), span_(span), cfg_(config) {
  if (n <= 0) throw Error("mma: variable count must be positive");
  if (!(span > 0.0)) throw Error("mma: span must be positive");
  lower_ = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  upper_ = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
}

void MmaSolver::set_bounds(const Eigen::VectorXd& lower,
                           const Eigen::VectorXd& upper) {
  if (lower.size() != n_ || upper.size() != n_)
    throw Error("mma: bound size mismatch");
  lower_ = lower;
  upper_ = upper;
}

Eigen::VectorXd MmaSolver::step(const Eigen::VectorXd& x, double j,
                                const Eigen::VectorXd& dj, double g,
                                const Eigen::VectorXd& dg) {
  if (x.size() != n_ || dj.size() != n_ || dg.size() != n_)
    throw Error("mma: dimension mismatch");
  if (!std::isfinite(j) || !std::isfinite(g) || !dj.allFinite() ||
      !dg.allFinite())
    throw Error("mma: non-finite inputs");

  // Asymptote update: fixed offset for the first two iterations, then the
  // oscillation heuristic per variable.
  if (iter_ < 2) {
    low_ = x.array() - cfg_.asy_init * span_;
    upp_ = x.array() + cfg_.asy_init * span_;
  } else {
    for (int i = 0; i < n_; ++i) {
      const double osc = (x[i] - xold1_[i]) * (xold1_[i] - xold2_[i]);
      const double gamma =
          osc > 0.0 ? cfg_.asy_grow : (osc < 0.0 ? cfg_.asy_shrink : 1.0);
      low_[i] = x[i] - gamma * (xold1_[i] - low_[i]);
      upp_[i] = x[i] + gamma * (upp_[i] - xold1_[i]);
      // keep the asymptotes a sane distance from the iterate; the inner clamp
      // is tiny so oscillation contraction can converge onto interior optima
      low_[i] = std::max(low_[i], x[i] - 10.0 * span_);
      low_[i] = std::min(low_[i], x[i] - 1e-6 * span_);
      upp_[i] = std::min(upp_[i], x[i] + 10.0 * span_);
      upp_[i] = std::max(upp_[i], x[i] + 1e-6 * span_);
    }
  }

  // Separable approximation coefficients.
  Eigen::VectorXd p0(n_), q0(n_), p1(n_), q1(n_), alpha(n_), beta(n_);
  double r1 = g;  // constant part of the approximated constraint
  for (int i = 0; i < n_; ++i) {
    const double du = upp_[i] - x[i];
    const double dl = x[i] - low_[i];
    const double floor0 = cfg_.raa0 / span_;
    const double jp = std::max(dj[i], 0.0);
    const double jm = std::max(-dj[i], 0.0);
    const double gp = std::max(dg[i], 0.0);
    const double gm = std::max(-dg[i], 0.0);
    p0[i] = du * du * (1.001 * jp + 0.001 * jm + floor0);
    q0[i] = dl * dl * (0.001 * jp + 1.001 * jm + floor0);
    p1[i] = du * du * (1.001 * gp + 0.001 * gm + floor0);
    q1[i] = dl * dl * (0.001 * gp + 1.001 * gm + floor0);
    r1 -= p1[i] / du + q1[i] / dl;

    alpha[i] = std::max(lower_[i],
                        std::max(low_[i] + 0.1 * dl, x[i] - span_));
    beta[i] = std::min(upper_[i], std::min(upp_[i] - 0.1 * du, x[i] + span_));
    if (alpha[i] > beta[i]) alpha[i] = beta[i] = 0.5 * (alpha[i] + beta[i]);
  }
  (void)j;

  // Subproblem primal minimizer for a given dual multiplier.
  Eigen::VectorXd xl(n_);
  auto primal = [&](double lambda) -> const Eigen::VectorXd& {
    for (int i = 0; i < n_; ++i) {
      const double sp = std::sqrt(p0[i] + lambda * p1[i]);
      const double sq = std::sqrt(q0[i] + lambda * q1[i]);
      double xi = (low_[i] * sp + upp_[i] * sq) / (sp + sq);
      xl[i] = std::min(std::max(xi, alpha[i]), beta[i]);
    }
    return xl;
  };
  auto constraint = [&](double lambda) {
    const auto& xs = primal(lambda);
    double c = r1;
    for (int i = 0; i < n_; ++i)
      c += p1[i] / (upp_[i] - xs[i]) + q1[i] / (xs[i] - low_[i]);
    return c;
  };

  double lambda = 0.0;
  if (constraint(0.0) > 0.0) {
    double lo = 0.0, hi = 1.0;
    while (constraint(hi) > 0.0 && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (constraint(mid) > 0.0 ? lo : hi) = mid;
    }
    lambda = hi;  // feasible side of the bracket
  }
  const Eigen::VectorXd x_next = primal(lambda);

  xold2_ = iter_ >= 1 ? xold1_ : x;
  xold1_ = x;
  ++iter_;
  return x_next;
}

}  // namespace shellopt::optimizer
