#pragma once

#include <Eigen/Core>
#include <vector>

#include "quadsim/types.hpp"

namespace quadsim {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Fully connected network, tanh on hidden layers, linear output.
/// Batches are stored column-wise: one sample per column.
class Mlp {
 public:
  /// Activations kept by forward for the backward pass.
  struct Cache {
    std::vector<MatrixXd> layer_inputs;  // input to each affine layer
  };

  /// Same layout as the flat parameter vector.
  struct Gradient {
    std::vector<MatrixXd> weights;
    std::vector<VectorXd> biases;
  };

  Mlp() = default;
  /// Zero-initialized network with the given layer widths (>= 2 entries).
  explicit Mlp(std::vector<int> sizes);

  /// Fan-in uniform hidden layers; the output layer is further scaled by
  /// `output_scale` and all biases start at zero.
  void initialize(Rng& rng, double output_scale = 0.01);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(weights_.size()); }
  int num_params() const;

  MatrixXd& weight(int layer) { return weights_[layer]; }
  const MatrixXd& weight(int layer) const { return weights_[layer]; }
  VectorXd& bias(int layer) { return biases_[layer]; }
  const VectorXd& bias(int layer) const { return biases_[layer]; }

  /// Throws std::invalid_argument on input size mismatch.
  VectorXd forward(const Eigen::Ref<const VectorXd>& x) const;
  MatrixXd forward_batch(const Eigen::Ref<const MatrixXd>& x) const;
  MatrixXd forward_batch(const Eigen::Ref<const MatrixXd>& x, Cache& cache) const;

  /// Parameter gradient of sum_j <grad_output_j, f(x_j)> given the cache
  /// of the forward pass over the same batch.
  Gradient backward(const Cache& cache, const MatrixXd& grad_output) const;

  /// weights then bias per layer, weights row-major.
  VectorXd flat_params() const;
  void set_flat_params(const VectorXd& flat);
  VectorXd flatten(const Gradient& grad) const;

  bool all_finite() const;

 private:
  std::vector<int> sizes_;
  std::vector<MatrixXd> weights_;  // out x in
  std::vector<VectorXd> biases_;
};

}  // namespace quadsim
