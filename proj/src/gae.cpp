#include "quadsim/gae.hpp"

#include <cmath>
#include <stdexcept>

namespace quadsim {

AdvantageEstimate compute_gae(const Eigen::VectorXd& rewards,
                              const Eigen::VectorXd& values, double gamma,
                              double lambda) {
  const Eigen::Index n = rewards.size();
  if (values.size() != n + 1) {
    throw std::invalid_argument("compute_gae: values must have one more entry than rewards");
  }
  AdvantageEstimate out;
  out.advantages.resize(n);
  double next = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const double delta = rewards[t] + gamma * values[t + 1] - values[t];
    next = delta + gamma * lambda * next;
    out.advantages[t] = next;
  }
  out.returns = out.advantages + values.head(n);
  return out;
}

void normalize_advantages(Eigen::VectorXd& advantages) {
  if (advantages.size() == 0) return;
  const double mean = advantages.mean();
  advantages.array() -= mean;
  const double var = advantages.squaredNorm() / static_cast<double>(advantages.size());
  advantages /= std::sqrt(var) + 1e-8;
}

}  // namespace quadsim
