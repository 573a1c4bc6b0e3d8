#include "shellopt/nrep/network.hpp"

#include <cmath>
#include <random>

namespace shellopt::nrep {

Eigen::MatrixXd apply_activation(const ActivationSpec& a,
                                 const Eigen::MatrixXd& z) {
  switch (a.kind) {
    case Activation::sinusoidal:
      return ((a.omega * z).array() + a.delta).sin();
    case Activation::relu:
      return z.cwiseMax(0.0);
    case Activation::tanh:
      return z.array().tanh();
    case Activation::identity:
      return z;
  }
  throw Error("unknown activation");
}

Eigen::MatrixXd activation_derivative(const ActivationSpec& a,
                                      const Eigen::MatrixXd& z) {
  switch (a.kind) {
    case Activation::sinusoidal:
      return a.omega * ((a.omega * z).array() + a.delta).cos();
    case Activation::relu:
      return (z.array() > 0.0).cast<double>();
    case Activation::tanh:
      return 1.0 - z.array().tanh().square();
    case Activation::identity:
      return Eigen::MatrixXd::Ones(z.rows(), z.cols());
  }
  throw Error("unknown activation");
}

void MlpNetwork::validate() const {
  if (layer_sizes.size() < 2) throw ConfigError("network needs at least two layers");
  for (int s : layer_sizes)
    if (s < 1) throw ConfigError("network layer sizes must be positive");
  const auto layers = layer_sizes.size() - 1;
  if (weights.size() != layers || biases.size() != layers)
    throw ConfigError("network weight/bias count mismatch");
  if (activations.size() != layers - 1)
    throw ConfigError("network needs one activation per hidden layer");
  for (std::size_t l = 0; l < layers; ++l) {
    if (weights[l].rows() != layer_sizes[l + 1] ||
        weights[l].cols() != layer_sizes[l])
      throw ConfigError("network weight matrix shape mismatch");
    if (biases[l].size() != layer_sizes[l + 1])
      throw ConfigError("network bias vector shape mismatch");
  }
  for (const auto& a : activations)
    if (a.kind == Activation::sinusoidal && !(a.omega > 0.0))
      throw ConfigError("sinusoidal activation requires omega > 0");
  const int in = input_dim();
  const int out = output_dim();
  const bool ok = (output_mode == OutputMode::heightfield && in == 2 && out == 1) ||
                  (output_mode == OutputMode::surface3d && in == 2 && out == 3) ||
                  (output_mode == OutputMode::map3d && in == 3 && out == 3);
  if (!ok) throw ConfigError("network in/out dimensions do not match output mode");
}

MlpNetwork make_network(std::vector<int> layer_sizes,
                        std::vector<ActivationSpec> activations,
                        OutputMode mode, std::array<double, 2> extents) {
  MlpNetwork net;
  net.layer_sizes = std::move(layer_sizes);
  net.activations = std::move(activations);
  net.output_mode = mode;
  net.extents = extents;
  const auto layers = net.layer_sizes.size() - 1;
  net.weights.reserve(layers);
  net.biases.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    net.weights.push_back(Eigen::MatrixXd::Zero(net.layer_sizes[l + 1],
                                                net.layer_sizes[l]));
    net.biases.push_back(Eigen::VectorXd::Zero(net.layer_sizes[l + 1]));
  }
  net.validate();
  return net;
}

int count_params(const MlpNetwork& net) {
  int n = 0;
  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l)
    n += net.layer_sizes[l] * net.layer_sizes[l + 1] + net.layer_sizes[l + 1];
  return n;
}

Eigen::VectorXd get_params(const MlpNetwork& net) {
  Eigen::VectorXd p(count_params(net));
  Eigen::Index at = 0;
  for (int l = 0; l < net.layer_count(); ++l) {
    const auto& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) p[at++] = w(r, c);
    for (Eigen::Index r = 0; r < net.biases[l].size(); ++r)
      p[at++] = net.biases[l][r];
  }
  return p;
}

void set_params(MlpNetwork& net, const Eigen::VectorXd& params) {
  if (params.size() != count_params(net))
    throw ConfigError("parameter vector length mismatch");
  Eigen::Index at = 0;
  for (int l = 0; l < net.layer_count(); ++l) {
    auto& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = params[at++];
    for (Eigen::Index r = 0; r < net.biases[l].size(); ++r)
      net.biases[l][r] = params[at++];
  }
}

void init_params(MlpNetwork& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double bound) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return bound * (2.0 * u - 1.0);
  };
  for (int l = 0; l < net.layer_count(); ++l) {
    double bound = std::sqrt(6.0 / net.layer_sizes[l]);
    const bool hidden = l + 1 < net.layer_count();
    if (hidden && net.activations[l].kind == Activation::sinusoidal)
      bound /= net.activations[l].omega;
    auto& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = uniform(bound);
    for (Eigen::Index r = 0; r < net.biases[l].size(); ++r)
      net.biases[l][r] = uniform(bound);
  }
}

ForwardCache forward_cached(const MlpNetwork& net,
                            const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != net.input_dim())
    throw ConfigError("network input dimension mismatch");
  ForwardCache c;
  const int layers = net.layer_count();
  c.z.resize(layers);
  c.h.resize(layers + 1);
  c.h[0] = inputs;
  for (int l = 0; l < layers; ++l) {
    c.z[l] = (net.weights[l] * c.h[l]).colwise() + net.biases[l];
    c.h[l + 1] = (l + 1 < layers) ? apply_activation(net.activations[l], c.z[l])
                                  : c.z[l];
  }
  return c;
}

Eigen::MatrixXd forward_raw(const MlpNetwork& net,
                            const Eigen::MatrixXd& inputs) {
  return forward_cached(net, inputs).output();
}

Eigen::MatrixXd forward(const MlpNetwork& net, const Eigen::MatrixXd& inputs) {
  const Eigen::MatrixXd raw = forward_raw(net, inputs);
  if (net.output_mode != OutputMode::heightfield) return raw;
  Eigen::MatrixXd out(3, inputs.cols());
  out.row(0) = net.extents[0] * inputs.row(0);
  out.row(1) = net.extents[1] * inputs.row(1);
  out.row(2) = raw.row(0);
  return out;
}

Eigen::MatrixXd jacobian_wrt_params(const MlpNetwork& net,
                                    const Eigen::MatrixXd& inputs) {
  const ForwardCache cache = forward_cached(net, inputs);
  const int layers = net.layer_count();
  const Eigen::Index n = inputs.cols();
  const int n_out = net.output_dim();
  const int n_par = count_params(net);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n * n_out, n_par);

  // per-layer activation derivatives, shared by all output seeds
  std::vector<Eigen::MatrixXd> dphi(layers - 1);
  for (int l = 0; l + 1 < layers; ++l)
    dphi[l] = activation_derivative(net.activations[l], cache.z[l]);

  // parameter offsets per layer in the flattened vector
  std::vector<int> offset(layers);
  int at = 0;
  for (int l = 0; l < layers; ++l) {
    offset[l] = at;
    at += net.layer_sizes[l] * net.layer_sizes[l + 1] + net.layer_sizes[l + 1];
  }

  for (int o = 0; o < n_out; ++o) {
    // delta[l] = d out_o / d z_l, one column per point
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(n_out, n);
    delta.row(o).setOnes();
    for (int l = layers - 1; l >= 0; --l) {
      const auto& hin = cache.h[l];  // layer input, sizes[l] x n
      const int rows = net.layer_sizes[l + 1];
      const int cols = net.layer_sizes[l];
      for (Eigen::Index p = 0; p < n; ++p) {
        const Eigen::Index row = p * n_out + o;
        for (int r = 0; r < rows; ++r) {
          const double d = delta(r, p);
          if (d == 0.0) continue;
          const int woff = offset[l] + r * cols;
          for (int c = 0; c < cols; ++c) jac(row, woff + c) += d * hin(c, p);
          jac(row, offset[l] + rows * cols + r) += d;
        }
      }
      if (l > 0) delta = (net.weights[l].transpose() * delta).cwiseProduct(dphi[l - 1]);
    }
  }
  return jac;
}

}  // namespace shellopt::nrep
