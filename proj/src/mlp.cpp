#include "quadsim/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quadsim {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least two layer sizes");
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("Mlp layer sizes must be positive");
  }
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    weights_.push_back(MatrixXd::Zero(sizes_[i + 1], sizes_[i]));
    biases_.push_back(VectorXd::Zero(sizes_[i + 1]));
  }
}

void Mlp::initialize(Rng& rng, double output_scale) {
  for (int l = 0; l < num_layers(); ++l) {
    const double limit = std::sqrt(3.0 / weights_[l].cols());
    std::uniform_real_distribution<double> u(-limit, limit);
    for (int r = 0; r < weights_[l].rows(); ++r) {
      for (int c = 0; c < weights_[l].cols(); ++c) weights_[l](r, c) = u(rng);
    }
    biases_[l].setZero();
  }
  weights_.back() *= output_scale;
}

int Mlp::num_params() const {
  int n = 0;
  for (int l = 0; l < num_layers(); ++l) n += weights_[l].size() + biases_[l].size();
  return n;
}

VectorXd Mlp::forward(const Eigen::Ref<const VectorXd>& x) const {
  if (x.size() != input_size()) {
    throw std::invalid_argument("Mlp::forward: expected input of size " +
                                std::to_string(input_size()) + ", got " +
                                std::to_string(x.size()));
  }
  VectorXd h = x;
  for (int l = 0; l < num_layers(); ++l) {
    VectorXd z = weights_[l] * h + biases_[l];
    h = (l + 1 < num_layers()) ? VectorXd(z.array().tanh()) : z;
  }
  return h;
}

MatrixXd Mlp::forward_batch(const Eigen::Ref<const MatrixXd>& x) const {
  Cache unused;
  return forward_batch(x, unused);
}

MatrixXd Mlp::forward_batch(const Eigen::Ref<const MatrixXd>& x, Cache& cache) const {
  if (x.rows() != input_size()) {
    throw std::invalid_argument("Mlp::forward_batch: wrong input rows");
  }
  cache.layer_inputs.resize(num_layers());
  cache.layer_inputs[0] = x;
  for (int l = 0; l < num_layers(); ++l) {
    MatrixXd z = weights_[l] * cache.layer_inputs[l];
    z.colwise() += biases_[l];
    if (l + 1 < num_layers()) {
      cache.layer_inputs[l + 1] = z.array().tanh();
    } else {
      return z;
    }
  }
  return {};
}

Mlp::Gradient Mlp::backward(const Cache& cache, const MatrixXd& grad_output) const {
  Gradient g;
  g.weights.resize(num_layers());
  g.biases.resize(num_layers());
  MatrixXd delta = grad_output;  // dL/dz for the current layer
  for (int l = num_layers() - 1; l >= 0; --l) {
    g.weights[l].noalias() = delta * cache.layer_inputs[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      const MatrixXd& h = cache.layer_inputs[l];
      MatrixXd back = weights_[l].transpose() * delta;
      delta = back.array() * (1.0 - h.array().square());
    }
  }
  return g;
}

VectorXd Mlp::flat_params() const {
  VectorXd flat(num_params());
  int k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    for (int r = 0; r < weights_[l].rows(); ++r) {
      for (int c = 0; c < weights_[l].cols(); ++c) flat[k++] = weights_[l](r, c);
    }
    for (int r = 0; r < biases_[l].size(); ++r) flat[k++] = biases_[l][r];
  }
  return flat;
}

void Mlp::set_flat_params(const VectorXd& flat) {
  if (flat.size() != num_params()) {
    throw std::invalid_argument("Mlp::set_flat_params: size mismatch");
  }
  int k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    for (int r = 0; r < weights_[l].rows(); ++r) {
      for (int c = 0; c < weights_[l].cols(); ++c) weights_[l](r, c) = flat[k++];
    }
    for (int r = 0; r < biases_[l].size(); ++r) biases_[l][r] = flat[k++];
  }
}

VectorXd Mlp::flatten(const Gradient& grad) const {
  VectorXd flat(num_params());
  int k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    for (int r = 0; r < weights_[l].rows(); ++r) {
      for (int c = 0; c < weights_[l].cols(); ++c) flat[k++] = grad.weights[l](r, c);
    }
    for (int r = 0; r < biases_[l].size(); ++r) flat[k++] = grad.biases[l][r];
  }
  return flat;
}

bool Mlp::all_finite() const {
  for (int l = 0; l < num_layers(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

}  // namespace quadsim
