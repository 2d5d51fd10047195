#include <doctest.h>

#include <cmath>

#include "ebrm/environments.hpp"

using namespace ebrm;

TEST_CASE("two-point warm-up prior") {
  const auto prior = InstancePrior::warm_up();
  RandomStream rng(1);
  int first = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto inst = sample_instance(prior, rng);
    REQUIRE(inst.kind == InstanceKind::bernoulli);
    REQUIRE(inst.arms() == 2);
    const bool is_first = inst.mu[0] == 0.55 && inst.mu[1] == 0.45;
    const bool is_second = inst.mu[0] == 0.45 && inst.mu[1] == 0.55;
    REQUIRE((is_first || is_second));
    first += is_first;
  }
  CHECK(std::abs(first / 2000.0 - 0.5) < 0.03);
}

TEST_CASE("beta_means prior pools to mean one half") {
  const auto prior = InstancePrior::bernoulli_k10();
  RandomStream rng(2);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto inst = sample_instance(prior, rng);
    REQUIRE(inst.arms() == 10);
    for (double m : inst.mu) {
      REQUIRE(m >= 0.0);
      REQUIRE(m <= 1.0);
      sum += m;
    }
  }
  CHECK(std::abs(sum / 1e5 - 0.5) < 0.01);
}

TEST_CASE("linear prior shapes and box support") {
  const auto prior = InstancePrior::linear_k100();
  RandomStream rng(3);
  const auto inst = sample_instance(prior, rng);
  CHECK(inst.features.rows() == 100);
  CHECK(inst.features.cols() == 10);
  CHECK(inst.theta_star.size() == 10);
  CHECK(inst.features.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(inst.theta_star.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(inst.noise_sigma == 0.5);
  // optimal arm is the largest x_i^T theta*
  Eigen::Index best;
  (inst.features * inst.theta_star).maxCoeff(&best);
  CHECK(inst.cached_optimal.value() == static_cast<ArmIndex>(best));
}

TEST_CASE("logistic prior means are sigmoids") {
  RandomStream rng(4);
  const auto inst = sample_instance(InstancePrior::logistic_k100(), rng);
  for (int i = 0; i < 100; ++i) {
    const double z = inst.features.row(i).dot(inst.theta_star);
    CHECK(inst.mu[i] == doctest::Approx(1.0 / (1.0 + std::exp(-z))).epsilon(1e-12));
  }
}

TEST_CASE("sampling is reproducible") {
  RandomStream a(7), b(7);
  const auto x = sample_instance(InstancePrior::linear_k100(), a);
  const auto y = sample_instance(InstancePrior::linear_k100(), b);
  CHECK(x.features == y.features);
  CHECK(x.theta_star == y.theta_star);
}

TEST_CASE("degenerate bernoulli rounds") {
  const auto inst = ProblemInstance::bernoulli({1.0, 0.0});
  RandomStream rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto y = realize_round(inst, rng);
    REQUIRE(y[0] == 1.0);
    REQUIRE(y[1] == 0.0);
  }
}

TEST_CASE("beta rewards have Beta(v mu, v (1 - mu)) moments") {
  const auto inst = ProblemInstance::beta({0.5, 0.0, 1.0}, 4.0);
  RandomStream rng(6);
  const int n = 100000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto y = realize_round(inst, rng);
    REQUIRE(y[1] == 0.0);
    REQUIRE(y[2] == 1.0);
    s1 += y[0];
    s2 += y[0] * y[0];
  }
  const double mean = s1 / n;
  CHECK(std::abs(mean - 0.5) < 0.01);
  CHECK(std::abs(s2 / n - mean * mean - 0.05) < 0.005);
}

TEST_CASE("noise-free linear rewards equal x^T theta") {
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, -1, 0.5;
  Eigen::VectorXd th(2);
  th << 0.3, -0.2;
  const auto inst = ProblemInstance::linear(x, th, 0.0);
  RandomStream rng(7);
  const auto y = realize_round(inst, rng);
  CHECK(y[0] == doctest::Approx(-0.1));
  CHECK(y[1] == doctest::Approx(-0.4));
}

TEST_CASE("reward means converge for every family") {
  RandomStream rng(8);
  std::vector<ProblemInstance> instances;
  instances.push_back(ProblemInstance::bernoulli({0.2, 0.9}));
  instances.push_back(ProblemInstance::beta({0.3, 0.8}, 4.0));
  RandomStream draw(9);
  instances.push_back(sample_instance(InstancePrior{.family = PriorFamily::linear_uniform,
                                                    .arms = 3, .dim = 2},
                                      draw));
  instances.push_back(sample_instance(InstancePrior{.family = PriorFamily::logistic_uniform,
                                                    .arms = 3, .dim = 2},
                                      draw));
  const int n = 100000;
  for (const auto& inst : instances) {
    std::vector<double> sums(inst.arms(), 0.0);
    for (int i = 0; i < n; ++i) {
      const auto y = realize_round(inst, rng);
      for (std::size_t k = 0; k < y.size(); ++k) sums[k] += y[k];
    }
    for (std::size_t k = 0; k < sums.size(); ++k) {
      // reward std is at most 0.5 for [0,1] rewards and sigma for linear
      const double sd = inst.kind == InstanceKind::linear ? inst.noise_sigma : 0.5;
      CHECK(std::abs(sums[k] / n - inst.mu[k]) < 4.0 * sd / std::sqrt(double(n)));
    }
  }
}

TEST_CASE("optimal arm") {
  RandomStream rng(10);
  auto a = ProblemInstance::bernoulli({0.55, 0.45});
  CHECK(optimal_arm(a, rng) == 0);
  auto b = ProblemInstance::bernoulli({0.45, 0.55});
  CHECK(optimal_arm(b, rng) == 1);

  std::vector<int> counts(3, 0);
  for (int i = 0; i < 3000; ++i) {
    auto tie = ProblemInstance::bernoulli({0.3, 0.3, 0.3});
    const auto first = optimal_arm(tie, rng);
    REQUIRE(optimal_arm(tie, rng) == first);  // cached
    ++counts[first];
  }
  for (int c : counts) CHECK(std::abs(c / 3000.0 - 1.0 / 3.0) < 0.05);
}

TEST_CASE("binarize_reward") {
  RandomStream rng(11);
  CHECK(binarize_reward(0.0, rng) == 0.0);
  CHECK(binarize_reward(1.0, rng) == 1.0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += binarize_reward(0.3, rng);
  CHECK(std::abs(sum / 1e5 - 0.3) < 5e-3);
  CHECK_THROWS_AS(binarize_reward(1.2, rng), std::invalid_argument);
  CHECK_THROWS_AS(binarize_reward(-0.1, rng), std::invalid_argument);
}

TEST_CASE("prior validation") {
  InstancePrior p;
  p.arms = 0;
  p.family = PriorFamily::beta_means;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  InstancePrior q = InstancePrior::beta_k10();
  q.v = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  InstancePrior r = InstancePrior::linear_k100();
  r.sigma = -1.0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  CHECK(prior_family_from_string(to_string(PriorFamily::logistic_uniform)) ==
        PriorFamily::logistic_uniform);
}
