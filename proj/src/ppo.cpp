#include "quadsim/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace quadsim {

namespace {

MatrixXd gather(const MatrixXd& m, const std::vector<int>& idx) {
  MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(j) = m.col(idx[j]);
  return out;
}

void clip_norm(VectorXd& g, double max_norm) {
  if (max_norm <= 0.0) return;
  const double n = g.norm();
  if (n > max_norm) g *= max_norm / n;
}

}  // namespace

void validate(const PpoConfig& cfg) {
  if (!(cfg.clip > 0.0 && cfg.clip < 1.0)) throw std::invalid_argument("clip must lie in (0, 1)");
  if (cfg.epochs < 1 || cfg.minibatch < 1) {
    throw std::invalid_argument("epochs and minibatch must be positive");
  }
  if (!(cfg.policy_lr > 0.0 && cfg.value_lr > 0.0)) {
    throw std::invalid_argument("learning rates must be positive");
  }
}

VectorXd policy_params(const PolicyNet& policy) {
  const VectorXd mlp = policy.mean.flat_params();
  VectorXd flat(mlp.size() + policy.log_std.size());
  flat << mlp, policy.log_std;
  return flat;
}

void set_policy_params(PolicyNet& policy, const VectorXd& flat) {
  const Eigen::Index n = policy.mean.num_params();
  policy.mean.set_flat_params(flat.head(n));
  policy.log_std = flat.tail(policy.log_std.size());
}

double policy_loss(const PolicyNet& policy, const PpoSamples& s,
                   const std::vector<int>& indices, double clip, VectorXd* grad) {
  const auto batch = static_cast<Eigen::Index>(indices.size());
  if (batch == 0) throw std::invalid_argument("policy_loss: empty minibatch");
  const MatrixXd obs = gather(s.observations, indices);
  Mlp::Cache cache;
  const MatrixXd mean = policy.mean.forward_batch(obs, cache);
  const VectorXd inv_var = (-2.0 * policy.log_std).array().exp();

  const int act = policy.action_size();
  MatrixXd grad_mean = MatrixXd::Zero(act, batch);
  VectorXd grad_log_std = VectorXd::Zero(act);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < batch; ++j) {
    const int i = indices[j];
    const VectorXd a = s.actions.col(i);
    const double lp = gaussian_log_prob(mean.col(j), policy.log_std, a);
    const double ratio = std::exp(lp - s.log_probs[i]);
    const double adv = s.advantages[i];
    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * adv;
    loss -= std::min(unclipped, clipped);
    if (grad != nullptr && unclipped <= clipped) {
      // d(-ratio A)/d(log p) = -ratio A.
      const double dlp = -unclipped;
      const VectorXd diff = a - mean.col(j);
      grad_mean.col(j) = dlp * diff.cwiseProduct(inv_var);
      grad_log_std += dlp * (diff.cwiseAbs2().cwiseProduct(inv_var).array() - 1.0).matrix();
    }
  }
  const double scale = 1.0 / static_cast<double>(batch);
  if (grad != nullptr) {
    grad_mean *= scale;
    const VectorXd g_mlp = policy.mean.flatten(policy.mean.backward(cache, grad_mean));
    grad->resize(g_mlp.size() + act);
    *grad << g_mlp, grad_log_std * scale;
  }
  return loss * scale;
}

double value_loss(const Mlp& value, const PpoSamples& s, const std::vector<int>& indices,
                  VectorXd* grad) {
  const auto batch = static_cast<Eigen::Index>(indices.size());
  if (batch == 0) throw std::invalid_argument("value_loss: empty minibatch");
  const MatrixXd obs = gather(s.observations, indices);
  Mlp::Cache cache;
  const MatrixXd pred = value.forward_batch(obs, cache);
  MatrixXd err(1, batch);
  for (Eigen::Index j = 0; j < batch; ++j) err(0, j) = pred(0, j) - s.returns[indices[j]];
  const double scale = 1.0 / static_cast<double>(batch);
  if (grad != nullptr) {
    *grad = value.flatten(value.backward(cache, 2.0 * scale * err));
  }
  return err.squaredNorm() * scale;
}

double ppo_loss(const PolicyNet& policy, const Mlp& value, const PpoSamples& samples,
                const std::vector<int>& indices, double clip, double value_coef,
                VectorXd* grad) {
  VectorXd gp, gv;
  const double lp = policy_loss(policy, samples, indices, clip, grad ? &gp : nullptr);
  const double lv = value_loss(value, samples, indices, grad ? &gv : nullptr);
  if (grad != nullptr) {
    grad->resize(gp.size() + gv.size());
    *grad << gp, value_coef * gv;
  }
  return lp + value_coef * lv;
}

Adam::Adam(Eigen::Index size, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(VectorXd::Zero(size)), v_(VectorXd::Zero(size)) {}

void Adam::step(VectorXd& params, const VectorXd& grad) {
  if (grad.size() != m_.size() || params.size() != m_.size()) {
    throw std::invalid_argument("Adam::step: size mismatch");
  }
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

PpoOptimizers make_optimizers(const PolicyNet& policy, const Mlp& value,
                              const PpoConfig& cfg) {
  return {Adam(policy.mean.num_params() + policy.log_std.size(), cfg.policy_lr),
          Adam(value.num_params(), cfg.value_lr)};
}

PpoStats ppo_update(PolicyNet& policy, Mlp& value, const PpoSamples& samples,
                    const PpoConfig& cfg, PpoOptimizers& opt, Rng& rng) {
  validate(cfg);
  const auto n = static_cast<int>(samples.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  PpoStats stats;
  int updates = 0;
  long clipped = 0;
  long seen = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int start = 0; start < n; start += cfg.minibatch) {
      const int end = std::min(n, start + cfg.minibatch);
      const std::vector<int> idx(order.begin() + start, order.begin() + end);

      VectorXd gp, gv;
      const double lp = policy_loss(policy, samples, idx, cfg.clip, &gp);
      const double lv = value_loss(value, samples, idx, &gv);
      if (!std::isfinite(lp) || !std::isfinite(lv) || !gp.allFinite() || !gv.allFinite()) {
        throw std::runtime_error("ppo_update: non-finite loss");
      }
      clip_norm(gp, cfg.max_grad_norm);
      clip_norm(gv, cfg.max_grad_norm);

      if (epoch == cfg.epochs - 1) {
        const MatrixXd mean = policy.mean.forward_batch(gather(samples.observations, idx));
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const double ratio = std::exp(
              gaussian_log_prob(mean.col(j), policy.log_std, samples.actions.col(idx[j])) -
              samples.log_probs[idx[j]]);
          clipped += std::abs(ratio - 1.0) > cfg.clip;
        }
        seen += static_cast<long>(idx.size());
      }

      VectorXd pp = policy_params(policy);
      opt.policy.step(pp, gp);
      set_policy_params(policy, pp);
      VectorXd vp = value.flat_params();
      opt.value.step(vp, gv);
      value.set_flat_params(vp);

      stats.policy_loss += lp;
      stats.value_loss += lv;
      ++updates;
    }
  }
  if (updates > 0) {
    stats.policy_loss /= updates;
    stats.value_loss /= updates;
  }
  stats.clip_fraction = seen > 0 ? static_cast<double>(clipped) / seen : 0.0;
  return stats;
}

}  // namespace quadsim
