#include <doctest.h>

#include <cmath>
#include <random>

#include "quadsim/gae.hpp"
#include "quadsim/types.hpp"

using namespace quadsim;
using Eigen::VectorXd;

namespace {

// Direct sum A_t = sum_k (gamma lambda)^k delta_{t+k}.
VectorXd brute_force(const VectorXd& r, const VectorXd& v, double gamma, double lambda) {
  const Eigen::Index n = r.size();
  VectorXd a(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double acc = 0.0;
    for (Eigen::Index k = t; k < n; ++k) {
      const double delta = r[k] + gamma * v[k + 1] - v[k];
      acc += std::pow(gamma * lambda, static_cast<double>(k - t)) * delta;
    }
    a[t] = acc;
  }
  return a;
}

}  // namespace

TEST_CASE("hand-evaluated two-step episode") {
  VectorXd r(2);
  r << 1, 1;
  VectorXd v(3);
  v << 0.5, 0.5, 0.0;
  const AdvantageEstimate est = compute_gae(r, v, 1.0, 1.0);
  CHECK(est.advantages[0] == doctest::Approx(1.5));
  CHECK(est.advantages[1] == doctest::Approx(0.5));
  CHECK(est.returns[0] == doctest::Approx(2.0));
  CHECK(est.returns[1] == doctest::Approx(1.0));
}

TEST_CASE("lambda = 0 gives one-step TD errors") {
  Rng rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  VectorXd r(20);
  VectorXd v(21);
  for (int i = 0; i < 20; ++i) r[i] = n(rng);
  for (int i = 0; i < 21; ++i) v[i] = n(rng);
  const AdvantageEstimate est = compute_gae(r, v, 0.9, 0.0);
  for (int t = 0; t < 20; ++t) CHECK(est.advantages[t] == r[t] + 0.9 * v[t + 1] - v[t]);
}

TEST_CASE("matches the quadratic-time oracle") {
  Rng rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int len : {1, 5, 300}) {
    VectorXd r(len);
    VectorXd v(len + 1);
    for (int i = 0; i < len; ++i) r[i] = n(rng);
    for (int i = 0; i <= len; ++i) v[i] = n(rng);
    const VectorXd oracle = brute_force(r, v, 0.99, 0.95);
    const AdvantageEstimate est = compute_gae(r, v, 0.99, 0.95);
    CHECK((est.advantages - oracle).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((est.returns - (oracle + v.head(len))).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("length mismatch throws") {
  CHECK_THROWS_AS(compute_gae(VectorXd::Zero(3), VectorXd::Zero(3), 0.99, 0.95),
                  std::invalid_argument);
}

TEST_CASE("normalization keeps the ordering") {
  VectorXd a(5);
  a << 3.0, -1.0, 7.0, 0.5, 2.0;
  Eigen::Index before = 0;
  a.maxCoeff(&before);
  normalize_advantages(a);
  Eigen::Index after = 0;
  a.maxCoeff(&after);
  CHECK(before == after);
  CHECK(std::abs(a.mean()) < 1e-12);
  CHECK(std::sqrt((a.array() - a.mean()).square().mean()) == doctest::Approx(1.0));
}
