#include "ebrm/environments.hpp"

#include <cmath>
#include <stdexcept>

namespace ebrm {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Eigen::MatrixXd uniform_box(std::size_t rows, std::size_t cols, RandomStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = 2.0 * rng.uniform() - 1.0;
  return m;
}

void check_means(const std::vector<double>& mu) {
  if (mu.empty()) throw std::invalid_argument("instance must have at least one arm");
  for (double m : mu)
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("mean reward outside [0, 1]");
}

}  // namespace

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::bernoulli: return "bernoulli";
    case InstanceKind::beta: return "beta";
    case InstanceKind::linear: return "linear";
    case InstanceKind::logistic: return "logistic";
  }
  return "?";
}

ProblemInstance ProblemInstance::bernoulli(std::vector<double> mu) {
  check_means(mu);
  ProblemInstance p;
  p.kind = InstanceKind::bernoulli;
  p.mu = std::move(mu);
  return p;
}

ProblemInstance ProblemInstance::beta(std::vector<double> mu, double v) {
  check_means(mu);
  if (!(v > 0.0)) throw std::invalid_argument("beta_v must be positive");
  ProblemInstance p;
  p.kind = InstanceKind::beta;
  p.mu = std::move(mu);
  p.beta_v = v;
  return p;
}

ProblemInstance ProblemInstance::linear(Eigen::MatrixXd features, Eigen::VectorXd theta,
                                        double sigma) {
  if (features.rows() < 1 || features.cols() != theta.size())
    throw std::invalid_argument("features must be K x d with d = theta size");
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be non-negative");
  ProblemInstance p;
  p.kind = InstanceKind::linear;
  const Eigen::VectorXd means = features * theta;
  p.mu.assign(means.data(), means.data() + means.size());
  p.features = std::move(features);
  p.theta_star = std::move(theta);
  p.noise_sigma = sigma;
  return p;
}

ProblemInstance ProblemInstance::logistic(Eigen::MatrixXd features, Eigen::VectorXd theta) {
  if (features.rows() < 1 || features.cols() != theta.size())
    throw std::invalid_argument("features must be K x d with d = theta size");
  ProblemInstance p;
  p.kind = InstanceKind::logistic;
  const Eigen::VectorXd z = features * theta;
  p.mu.resize(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) p.mu[static_cast<std::size_t>(i)] = sigmoid(z(i));
  p.features = std::move(features);
  p.theta_star = std::move(theta);
  return p;
}

std::string to_string(PriorFamily family) {
  switch (family) {
    case PriorFamily::two_point: return "two_point";
    case PriorFamily::beta_means: return "beta_means";
    case PriorFamily::beta_rewards: return "beta_rewards";
    case PriorFamily::linear_uniform: return "linear_uniform";
    case PriorFamily::logistic_uniform: return "logistic_uniform";
  }
  return "?";
}

PriorFamily prior_family_from_string(const std::string& name) {
  for (auto f : {PriorFamily::two_point, PriorFamily::beta_means, PriorFamily::beta_rewards,
                 PriorFamily::linear_uniform, PriorFamily::logistic_uniform})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown prior family '" + name + "'");
}

void InstancePrior::validate() const {
  switch (family) {
    case PriorFamily::two_point:
      if (first.empty() || first.size() != second.size())
        throw std::invalid_argument("two_point: support means must be non-empty and equal length");
      check_means(first);
      check_means(second);
      if (two_point_beta_rewards && !(v > 0.0)) throw std::invalid_argument("v must be positive");
      break;
    case PriorFamily::beta_means:
      if (arms < 1) throw std::invalid_argument("arms must be >= 1");
      break;
    case PriorFamily::beta_rewards:
      if (arms < 1) throw std::invalid_argument("arms must be >= 1");
      if (!(v > 0.0)) throw std::invalid_argument("v must be positive");
      break;
    case PriorFamily::linear_uniform:
    case PriorFamily::logistic_uniform:
      if (arms < 1) throw std::invalid_argument("arms must be >= 1");
      if (dim < 1) throw std::invalid_argument("dim must be >= 1");
      if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
      break;
  }
}

InstancePrior InstancePrior::warm_up() { return InstancePrior{}; }

InstancePrior InstancePrior::bernoulli_k10() {
  InstancePrior p;
  p.family = PriorFamily::beta_means;
  p.arms = 10;
  return p;
}

InstancePrior InstancePrior::beta_k10() {
  InstancePrior p;
  p.family = PriorFamily::beta_rewards;
  p.arms = 10;
  p.v = 4.0;
  return p;
}

InstancePrior InstancePrior::linear_k100() {
  InstancePrior p;
  p.family = PriorFamily::linear_uniform;
  p.arms = 100;
  p.dim = 10;
  p.sigma = 0.5;
  return p;
}

InstancePrior InstancePrior::logistic_k100() {
  InstancePrior p = linear_k100();
  p.family = PriorFamily::logistic_uniform;
  return p;
}

InstancePrior InstancePrior::gittins_two_point(bool beta_rewards) {
  InstancePrior p;
  p.first = {0.6, 0.4};
  p.second = {0.4, 0.6};
  p.two_point_beta_rewards = beta_rewards;
  p.v = 4.0;
  return p;
}

ProblemInstance sample_instance(const InstancePrior& prior, RandomStream& rng) {
  ProblemInstance instance;
  switch (prior.family) {
    case PriorFamily::two_point: {
      const auto& mu = rng.bernoulli(0.5) ? prior.first : prior.second;
      instance = prior.two_point_beta_rewards ? ProblemInstance::beta(mu, prior.v)
                                              : ProblemInstance::bernoulli(mu);
      break;
    }
    case PriorFamily::beta_means:
    case PriorFamily::beta_rewards: {
      std::vector<double> mu(prior.arms);
      for (auto& m : mu) m = rng.uniform();  // Beta(1, 1)
      instance = prior.family == PriorFamily::beta_means
                     ? ProblemInstance::bernoulli(std::move(mu))
                     : ProblemInstance::beta(std::move(mu), prior.v);
      break;
    }
    case PriorFamily::linear_uniform:
    case PriorFamily::logistic_uniform: {
      Eigen::VectorXd theta = uniform_box(prior.dim, 1, rng);
      Eigen::MatrixXd x = uniform_box(prior.arms, prior.dim, rng);
      instance = prior.family == PriorFamily::linear_uniform
                     ? ProblemInstance::linear(std::move(x), std::move(theta), prior.sigma)
                     : ProblemInstance::logistic(std::move(x), std::move(theta));
      break;
    }
  }
  optimal_arm(instance, rng);
  return instance;
}

void realize_round(const ProblemInstance& instance, RandomStream& rng, std::span<double> out) {
  const auto& mu = instance.mu;
  switch (instance.kind) {
    case InstanceKind::bernoulli:
    case InstanceKind::logistic:
      for (std::size_t i = 0; i < mu.size(); ++i) out[i] = rng.uniform() < mu[i] ? 1.0 : 0.0;
      break;
    case InstanceKind::beta: {
      const double v = instance.beta_v;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] <= 0.0 || mu[i] >= 1.0)
          out[i] = mu[i];
        else
          out[i] = rng.beta(v * mu[i], v * (1.0 - mu[i]));
      }
      break;
    }
    case InstanceKind::linear:
      if (instance.noise_sigma == 0.0) {
        for (std::size_t i = 0; i < mu.size(); ++i) out[i] = mu[i];
      } else {
        for (std::size_t i = 0; i < mu.size(); ++i)
          out[i] = mu[i] + instance.noise_sigma * rng.normal();
      }
      break;
  }
}

std::vector<double> realize_round(const ProblemInstance& instance, RandomStream& rng) {
  std::vector<double> out(instance.arms());
  realize_round(instance, rng, out);
  return out;
}

ArmIndex optimal_arm(ProblemInstance& instance, RandomStream& rng) {
  if (!instance.cached_optimal) instance.cached_optimal = argmax_tiebreak(instance.mu, rng);
  return *instance.cached_optimal;
}

int binarize_reward(double y, RandomStream& rng) {
  if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("binarize_reward: y outside [0, 1]");
  return rng.uniform() < y ? 1 : 0;
}

}  // namespace ebrm
