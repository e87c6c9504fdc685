#pragma once

#include <Eigen/Core>

namespace quadsim {

struct AdvantageEstimate {
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;  // advantages + values
};

/// Generalized advantage estimation over one episode.  `values` holds one
/// more entry than `rewards`: the value of the state after the last step
/// (0 for a true terminal).  Throws std::invalid_argument on length mismatch.
AdvantageEstimate compute_gae(const Eigen::VectorXd& rewards,
                              const Eigen::VectorXd& values, double gamma,
                              double lambda);

/// Shifts and scales to zero mean and unit variance in place.
void normalize_advantages(Eigen::VectorXd& advantages);

}  // namespace quadsim
