#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "shellopt/errors.hpp"

namespace shellopt::nrep {

enum class Activation { sinusoidal, relu, tanh, identity };

// Hidden-layer activation; omega and delta are prescribed, not trained.
struct ActivationSpec {
  Activation kind = Activation::relu;
  double omega = 1.0;   // sinusoidal period coefficient
  double delta = 0.0;   // sinusoidal phase shift
};

// What the raw network output means physically:
//   heightfield: 2 -> 1, physical point is (ex*eta1, ey*eta2, out)
//   surface3d:   2 -> 3, output is the physical point
//   map3d:       3 -> 3, volumetric coordinate map
enum class OutputMode { heightfield, surface3d, map3d };

// Small fully-connected network with an affine output layer.  Immutable by
// convention: operations take it by const reference or return a new value.
struct MlpNetwork {
  std::vector<int> layer_sizes;             // [n_in, h_1, ..., h_L, n_out]
  std::vector<Eigen::MatrixXd> weights;     // weights[l]: sizes[l+1] x sizes[l]
  std::vector<Eigen::VectorXd> biases;      // biases[l]: sizes[l+1]
  std::vector<ActivationSpec> activations;  // one per hidden layer
  OutputMode output_mode = OutputMode::heightfield;
  std::array<double, 2> extents{1.0, 1.0};  // plan scale for heightfield mode

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int layer_count() const { return static_cast<int>(weights.size()); }
  void validate() const;  // throws ConfigError on inconsistency
};

// Zero-initialised network of the given architecture.
MlpNetwork make_network(std::vector<int> layer_sizes,
                        std::vector<ActivationSpec> activations,
                        OutputMode mode, std::array<double, 2> extents);

int count_params(const MlpNetwork& net);

// Flattening order (a stable artifact contract): layer-major, each layer's
// weight matrix row-major followed by its bias vector.
Eigen::VectorXd get_params(const MlpNetwork& net);
void set_params(MlpNetwork& net, const Eigen::VectorXd& params);

// Uniform fan-in initialisation: bound sqrt(6/fan_in), divided by omega for
// sinusoidal layers so pre-activations start in the near-linear range.
// Biases use the same bound as their layer's weights.
void init_params(MlpNetwork& net, std::uint64_t seed);

// Layer evaluations kept for backpropagation: h[0] is the input batch, h[l]
// the post-activation output of layer l, z[l] its pre-activation.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> z;
  std::vector<Eigen::MatrixXd> h;
  const Eigen::MatrixXd& output() const { return h.back(); }
};

// Raw network output for a batch of inputs (columns are points).
Eigen::MatrixXd forward_raw(const MlpNetwork& net, const Eigen::MatrixXd& inputs);
ForwardCache forward_cached(const MlpNetwork& net, const Eigen::MatrixXd& inputs);

// Elementwise activation value and derivative on a pre-activation batch.
Eigen::MatrixXd apply_activation(const ActivationSpec& a,
                                 const Eigen::MatrixXd& z);
Eigen::MatrixXd activation_derivative(const ActivationSpec& a,
                                      const Eigen::MatrixXd& z);

// Physical coordinates, 3 x N in every output mode (heightfield assembles
// the plan coordinates from the scaled inputs).
Eigen::MatrixXd forward(const MlpNetwork& net, const Eigen::MatrixXd& inputs);

// Exact reverse-mode derivatives of the raw outputs with respect to the
// flattened parameters.  Row p*n_out + o holds d out_o(point p) / d theta.
Eigen::MatrixXd jacobian_wrt_params(const MlpNetwork& net,
                                    const Eigen::MatrixXd& inputs);

}  // namespace shellopt::nrep
