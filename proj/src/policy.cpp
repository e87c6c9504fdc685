#include "quadsim/policy.hpp"

#include <cmath>

namespace quadsim {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

PolicyNet::PolicyNet(std::vector<int> sizes, double initial_log_std)
    : mean(std::move(sizes)) {
  log_std = VectorXd::Constant(mean.output_size(), initial_log_std);
}

PolicyNet PolicyNet::initialized(Rng& rng, double initial_log_std, std::vector<int> sizes) {
  PolicyNet net(std::move(sizes), initial_log_std);
  net.mean.initialize(rng, 0.01);
  return net;
}

VectorXd forward(const PolicyNet& net, const Eigen::Ref<const VectorXd>& obs) {
  return net.mean.forward(obs);
}

double gaussian_log_prob(const Eigen::Ref<const VectorXd>& mean,
                         const Eigen::Ref<const VectorXd>& log_std,
                         const Eigen::Ref<const VectorXd>& action) {
  double lp = 0.0;
  for (int i = 0; i < mean.size(); ++i) {
    const double z = (action[i] - mean[i]) * std::exp(-log_std[i]);
    lp += -0.5 * z * z - log_std[i] - 0.5 * kLog2Pi;
  }
  return lp;
}

SampledAction sample_around(const Eigen::Ref<const VectorXd>& mean,
                            const Eigen::Ref<const VectorXd>& log_std, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  SampledAction out;
  out.action.resize(mean.size());
  for (int i = 0; i < mean.size(); ++i) {
    out.action[i] = mean[i] + std::exp(log_std[i]) * unit(rng);
  }
  out.log_prob = gaussian_log_prob(mean, log_std, out.action);
  return out;
}

SampledAction sample_action(const PolicyNet& net, const Eigen::Ref<const VectorXd>& obs,
                            Rng& rng) {
  return sample_around(forward(net, obs), net.log_std, rng);
}

}  // namespace quadsim
