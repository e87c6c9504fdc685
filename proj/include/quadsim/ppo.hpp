#pragma once

#include <vector>

#include "quadsim/mlp.hpp"
#include "quadsim/policy.hpp"

namespace quadsim {

struct PpoConfig {
  double clip = 0.2;
  int epochs = 10;
  int minibatch = 4096;
  double policy_lr = 3e-4;
  double value_lr = 1e-3;
  /// Global gradient-norm clip per network; <= 0 disables.
  double max_grad_norm = 0.0;
};

void validate(const PpoConfig& cfg);

/// Training samples, one per column.  Advantages are expected normalized.
struct PpoSamples {
  MatrixXd observations;  // obs_dim x N
  MatrixXd actions;       // act_dim x N
  VectorXd log_probs;     // behaviour-policy log-density of each action
  VectorXd advantages;
  VectorXd returns;

  Eigen::Index size() const { return log_probs.size(); }
};

/// Clipped surrogate -mean(min(rho A, clip(rho, 1 - eps, 1 + eps) A)) over
/// `indices`.  When `grad` is non-null it receives the gradient with respect
/// to [mean-network flat params, log_std].
double policy_loss(const PolicyNet& policy, const PpoSamples& samples,
                   const std::vector<int>& indices, double clip, VectorXd* grad);

/// mean((V(o) - R)^2) over `indices`, gradient w.r.t. flat value params.
double value_loss(const Mlp& value, const PpoSamples& samples,
                  const std::vector<int>& indices, VectorXd* grad);

/// policy_loss + value_coef * value_loss, gradient over [policy, value]
/// parameters concatenated.
double ppo_loss(const PolicyNet& policy, const Mlp& value, const PpoSamples& samples,
                const std::vector<int>& indices, double clip, double value_coef,
                VectorXd* grad);

VectorXd policy_params(const PolicyNet& policy);
void set_policy_params(PolicyNet& policy, const VectorXd& flat);

class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index size, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);
  /// Gradient descent step on `params`.
  void step(VectorXd& params, const VectorXd& grad);

 private:
  double lr_ = 0.0;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  VectorXd m_;
  VectorXd v_;
};

struct PpoStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double clip_fraction = 0.0;
};

/// Optimizer state that persists across iterations.
struct PpoOptimizers {
  Adam policy;
  Adam value;
};

PpoOptimizers make_optimizers(const PolicyNet& policy, const Mlp& value,
                              const PpoConfig& cfg);

/// Several epochs of shuffled-minibatch updates.  Throws std::runtime_error
/// on a non-finite loss.
PpoStats ppo_update(PolicyNet& policy, Mlp& value, const PpoSamples& samples,
                    const PpoConfig& cfg, PpoOptimizers& opt, Rng& rng);

}  // namespace quadsim
