#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "quadsim/mlp.hpp"
#include "quadsim/types.hpp"

namespace quadsim {

inline const std::vector<int>& policy_layer_sizes() {
  static const std::vector<int> sizes = {kObsDim, 64, 64, kActDim};
  return sizes;
}

/// Deterministic mean network plus a state-independent Gaussian log standard
/// deviation used only while training.
struct PolicyNet {
  Mlp mean;
  VectorXd log_std;

  /// Zero weights, log_std = initial_log_std.
  explicit PolicyNet(std::vector<int> sizes = policy_layer_sizes(),
                     double initial_log_std = -1.0);

  static PolicyNet initialized(Rng& rng, double initial_log_std = -1.0,
                               std::vector<int> sizes = policy_layer_sizes());

  int action_size() const { return mean.output_size(); }
};

/// Mean action.  Throws std::invalid_argument unless obs has the input size.
VectorXd forward(const PolicyNet& net, const Eigen::Ref<const VectorXd>& obs);

/// Diagonal Gaussian log-density of `action` around `mean`.
double gaussian_log_prob(const Eigen::Ref<const VectorXd>& mean,
                         const Eigen::Ref<const VectorXd>& log_std,
                         const Eigen::Ref<const VectorXd>& action);

struct SampledAction {
  VectorXd action;
  double log_prob = 0.0;
};

/// a ~ N(mean, diag(exp(log_std))^2), with its log-density.
SampledAction sample_action(const PolicyNet& net, const Eigen::Ref<const VectorXd>& obs,
                            Rng& rng);
/// Same, given an already computed mean.
SampledAction sample_around(const Eigen::Ref<const VectorXd>& mean,
                            const Eigen::Ref<const VectorXd>& log_std, Rng& rng);

// Snapshot layout, all integers and floats little-endian:
//   char[4]   magic "QPOL"
//   uint32    format version (1)
//   uint32    number of layer sizes n, then n x uint32 sizes
//   per layer: float32 weights (out x in, row-major), float32 biases (out)
//   float32   log_std (output size)
inline constexpr char kSnapshotMagic[4] = {'Q', 'P', 'O', 'L'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<std::uint8_t> encode_snapshot(const PolicyNet& net);
/// Throws std::runtime_error on bad magic, version or truncated data.
PolicyNet decode_snapshot(const std::vector<std::uint8_t>& bytes);

void save_snapshot(const std::string& path, const PolicyNet& net);
PolicyNet load_snapshot(const std::string& path);

/// Self-contained C99 source defining
///   void <function_name>(const float in[IN], float out[OUT])
/// with the weights as static const arrays.  Output is deterministic.
std::string export_embedded(const PolicyNet& net,
                            const std::string& function_name = "quad_policy");

}  // namespace quadsim
