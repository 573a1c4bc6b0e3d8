#include "shellopt/nrep/training.hpp"

#include <cmath>
#include <string>

namespace shellopt::nrep {

namespace {

// Gradient of the batch MSE with respect to the flattened parameters.
Eigen::VectorXd mse_gradient(const MlpNetwork& net, const ForwardCache& cache,
                             const Eigen::MatrixXd& targets, double& mse) {
  const Eigen::MatrixXd residual = cache.output() - targets;
  const double count = static_cast<double>(residual.size());
  mse = residual.squaredNorm() / count;

  const int layers = net.layer_count();
  Eigen::VectorXd grad(count_params(net));
  Eigen::MatrixXd delta = (2.0 / count) * residual;
  Eigen::Index at = grad.size();
  for (int l = layers - 1; l >= 0; --l) {
    const Eigen::VectorXd db = delta.rowwise().sum();
    const Eigen::MatrixXd dw = delta * cache.h[l].transpose();
    at -= db.size();
    grad.segment(at, db.size()) = db;
    at -= dw.size();
    for (Eigen::Index r = 0; r < dw.rows(); ++r)
      grad.segment(at + r * dw.cols(), dw.cols()) = dw.row(r);
    if (l > 0) {
      delta = (net.weights[l].transpose() * delta)
                  .cwiseProduct(activation_derivative(
                      net.activations[l - 1], cache.z[l - 1]));
    }
  }
  return grad;
}

}  // namespace

double mse_loss(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
                const Eigen::MatrixXd& targets) {
  const Eigen::MatrixXd out = forward_raw(net, inputs);
  if (out.rows() != targets.rows() || out.cols() != targets.cols())
    throw ConfigError("training target shape mismatch");
  return (out - targets).squaredNorm() / static_cast<double>(targets.size());
}

FitResult fit(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
              const Eigen::MatrixXd& targets, const TrainingConfig& config) {
  if (config.epochs < 1) throw ConfigError("fit needs at least one epoch");
  if (config.learning_rate < 0.0)
    throw ConfigError("fit needs a nonnegative learning rate");
  if (targets.cols() != inputs.cols() || targets.rows() != net.output_dim())
    throw ConfigError("training target shape mismatch");

  FitResult result;
  result.net = net;
  const int n = count_params(net);
  Eigen::VectorXd theta = get_params(result.net);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

  double mse = 0.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const ForwardCache cache = forward_cached(result.net, inputs);
    const Eigen::VectorXd grad = mse_gradient(result.net, cache, targets, mse);
    if (!std::isfinite(mse))
      throw Error("training diverged: non-finite loss at epoch " +
                  std::to_string(epoch));
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
    const double mc = 1.0 - std::pow(b1, epoch);
    const double vc = 1.0 - std::pow(b2, epoch);
    theta -= (config.learning_rate / mc) *
             m.cwiseQuotient(((v / vc).cwiseSqrt().array() + eps).matrix());
    set_params(result.net, theta);
    if (config.report_every > 0 && epoch % config.report_every == 0)
      result.history.emplace_back(epoch, mse);
  }
  result.mse = mse_loss(result.net, inputs, targets);
  if (config.report_every > 0 &&
      (result.history.empty() || result.history.back().first != config.epochs))
    result.history.emplace_back(config.epochs, result.mse);
  return result;
}

FitResult polish(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& targets, int iterations) {
  if (iterations < 1) throw ConfigError("polish needs at least one iteration");
  if (targets.cols() != inputs.cols() || targets.rows() != net.output_dim())
    throw ConfigError("training target shape mismatch");

  FitResult result;
  result.net = net;
  Eigen::VectorXd theta = get_params(result.net);
  double mse = mse_loss(result.net, inputs, targets);
  double lambda = 1e-3;

  // The output layer is affine in its parameters, so its exact least-squares
  // solution is free (variable projection).  factor != 1 first scales every
  // hidden layer, trading weight magnitude between layers; that exchange is
  // the valley direction plain steps crawl along.  Accepted only on
  // improvement.
  auto try_resolve = [&](double factor) {
    MlpNetwork candidate = result.net;
    if (factor != 1.0) {
      for (int l = 0; l + 1 < candidate.layer_count(); ++l) {
        candidate.weights[l] *= factor;
        candidate.biases[l] *= factor;
      }
    }
    const ForwardCache cache = forward_cached(candidate, inputs);
    const Eigen::MatrixXd& feats = cache.h[candidate.layer_count() - 1];
    Eigen::MatrixXd design(feats.cols(), feats.rows() + 1);
    design.leftCols(feats.rows()) = feats.transpose();
    design.rightCols(1).setOnes();
    const Eigen::MatrixXd sol =
        design.colPivHouseholderQr().solve(targets.transpose());
    candidate.weights.back() = sol.topRows(feats.rows()).transpose();
    candidate.biases.back() = sol.bottomRows(1).transpose();
    const double candidate_mse = mse_loss(candidate, inputs, targets);
    if (std::isfinite(candidate_mse) && candidate_mse < mse) {
      result.net = std::move(candidate);
      theta = get_params(result.net);
      mse = candidate_mse;
    }
  };

  try_resolve(1.0);
  for (int it = 0; it < iterations && mse > 0.0; ++it) {
    const Eigen::MatrixXd out = forward_raw(result.net, inputs);
    Eigen::VectorXd residual(out.size());
    for (Eigen::Index p = 0; p < out.cols(); ++p)
      residual.segment(p * out.rows(), out.rows()) =
          out.col(p) - targets.col(p);
    const Eigen::MatrixXd jac = jacobian_wrt_params(result.net, inputs);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * residual;

    // Marquardt scaling: damping proportional to the curvature of each
    // parameter direction keeps steps useful in strongly anisotropic valleys.
    const double diag_floor = 1e-12 * jtj.diagonal().maxCoeff() + 1e-300;
    const Eigen::VectorXd scale = jtj.diagonal().cwiseMax(diag_floor);
    bool accepted = false;
    while (lambda <= 1e12) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * scale;
      const Eigen::VectorXd trial = theta - damped.ldlt().solve(jtr);
      MlpNetwork candidate = result.net;
      set_params(candidate, trial);
      const double trial_mse = mse_loss(candidate, inputs, targets);
      if (std::isfinite(trial_mse) && trial_mse < mse) {
        theta = trial;
        result.net = std::move(candidate);
        mse = trial_mse;
        lambda = std::max(lambda * 0.25, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;  // damping exhausted: no descent direction left
    try_resolve(1.0);
    for (double factor : {0.5, 0.8, 1.25, 2.0}) try_resolve(factor);
  }
  result.mse = mse;
  return result;
}

}  // namespace shellopt::nrep
