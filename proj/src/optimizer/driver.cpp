#include "shellopt/optimizer/driver.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "shellopt/errors.hpp"

namespace shellopt::optimizer {

namespace {

bool finite(const Evaluation& e) {
  return std::isfinite(e.compliance) && std::isfinite(e.volume) &&
         e.compliance_grad.allFinite() && e.volume_grad.allFinite();
}

}  // namespace

OptResult run(const OptProblem& problem, const Eigen::VectorXd& theta0) {
  if (!problem.evaluate) throw Error("optimizer: evaluate is not set");
  if (theta0.size() == 0) throw Error("optimizer: empty parameter vector");
  if (!theta0.allFinite()) throw Error("optimizer: non-finite initial point");

  const int n = static_cast<int>(theta0.size());
  const double range = theta0.maxCoeff() - theta0.minCoeff();
  const double move =
      problem.move_limit > 0.0 ? problem.move_limit : 0.2 * (range + 1.0);
  const double feas_tol = 1e-6 * std::max(1.0, std::abs(problem.v_max));

  MmaSolver solver(n, move, problem.mma);

  Evaluation cur = problem.evaluate(theta0);
  if (!finite(cur)) throw Error("optimizer: non-finite initial evaluation");
  const double scale = 1.0 / std::max(std::abs(cur.compliance), 1.0);

  OptResult out;
  out.theta = theta0;
  auto& hist = out.history;
  Eigen::VectorXd theta = theta0;
  Eigen::VectorXd best_theta = theta0;
  bool have_best = false;

  auto record = [&](int it, const Evaluation& e, double step_norm) {
    const double viol = std::max(0.0, e.volume - problem.v_max);
    hist.records.push_back(
        {it, e.compliance, e.volume, viol, theta.norm(), step_norm});
    if (viol <= feas_tol && e.compliance < hist.best_compliance) {
      hist.best_compliance = e.compliance;
      hist.best_iter = it;
      best_theta = theta;
      have_best = true;
    }
  };
  record(0, cur, 0.0);

  int settled = 0;
  hist.status = TerminalStatus::max_iter;
  for (int it = 1; it <= problem.max_iterations; ++it) {
    Eigen::VectorXd proposal =
        solver.step(theta, cur.compliance * scale, cur.compliance_grad * scale,
                    cur.volume - problem.v_max, cur.volume_grad);

    Evaluation next;
    bool ok = false;
    for (int attempt = 0; attempt <= 10; ++attempt) {
      try {
        next = problem.evaluate(proposal);
        ok = finite(next);
      } catch (const Error&) {
        ok = false;
      }
      if (ok) break;
      proposal = theta + 0.5 * (proposal - theta);
    }
    if (!ok) {
      hist.status = TerminalStatus::line_failure;
      break;
    }

    const double step_norm = (proposal - theta).norm();
    const double rel_change = std::abs(next.compliance - cur.compliance) /
                              std::max(std::abs(next.compliance), 1e-12);
    theta = proposal;
    cur = next;
    record(it, cur, step_norm);

    settled = rel_change < problem.rel_tol ? settled + 1 : 0;
    if (settled >= problem.settle_iterations &&
        hist.records.back().violation <= feas_tol) {
      hist.status = TerminalStatus::converged;
      break;
    }
  }

  out.theta = have_best ? best_theta : theta;
  return out;
}

void write_history_csv(const std::string& path, const OptHistory& history) {
  std::ofstream out(path);
  if (!out) throw Error("optimizer: cannot write history to " + path);
  out << "iter,compliance,volume,violation,step_norm\n";
  out << std::setprecision(12);
  for (const auto& r : history.records) {
    out << r.iter << ',' << r.compliance << ',' << r.volume << ','
        << r.violation << ',' << r.step_norm << '\n';
  }
}

}  // namespace shellopt::optimizer
