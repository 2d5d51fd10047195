#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebrm/core.hpp"

namespace ebrm {

enum class InstanceKind { bernoulli, beta, linear, logistic };

std::string to_string(InstanceKind kind);

// One sampled bandit problem. `mu` always holds the K mean rewards; for the
// structured kinds it is derived from the features and theta_star at
// construction. Linear rewards are not clamped to [0, 1].
struct ProblemInstance {
  InstanceKind kind = InstanceKind::bernoulli;
  std::vector<double> mu;
  Eigen::MatrixXd features;    // K x d, linear/logistic only
  Eigen::VectorXd theta_star;  // d, linear/logistic only
  double noise_sigma = 0.0;    // linear only
  double beta_v = 0.0;         // beta only
  std::optional<ArmIndex> cached_optimal;

  std::size_t arms() const { return mu.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  bool binary_rewards() const {
    return kind == InstanceKind::bernoulli || kind == InstanceKind::logistic;
  }

  static ProblemInstance bernoulli(std::vector<double> mu);
  static ProblemInstance beta(std::vector<double> mu, double v);
  static ProblemInstance linear(Eigen::MatrixXd features, Eigen::VectorXd theta, double sigma);
  static ProblemInstance logistic(Eigen::MatrixXd features, Eigen::VectorXd theta);
};

enum class PriorFamily { two_point, beta_means, beta_rewards, linear_uniform, logistic_uniform };

std::string to_string(PriorFamily family);
PriorFamily prior_family_from_string(const std::string& name);

struct InstancePrior {
  PriorFamily family = PriorFamily::two_point;
  std::size_t arms = 2;
  std::size_t dim = 10;
  double v = 4.0;        // beta_rewards, or two_point with beta rewards
  double sigma = 0.5;    // linear_uniform
  // two_point support; each point has probability 1/2.
  std::vector<double> first{0.55, 0.45};
  std::vector<double> second{0.45, 0.55};
  bool two_point_beta_rewards = false;

  // Throws std::invalid_argument naming the offending parameter.
  void validate() const;

  static InstancePrior warm_up();
  static InstancePrior bernoulli_k10();
  static InstancePrior beta_k10();
  static InstancePrior linear_k100();
  static InstancePrior logistic_k100();
  static InstancePrior gittins_two_point(bool beta_rewards);
};

// Draws an instance and resolves its optimal arm with the same stream.
ProblemInstance sample_instance(const InstancePrior& prior, RandomStream& rng);

// Fills `out` (size K) with one round of rewards for every arm.
void realize_round(const ProblemInstance& instance, RandomStream& rng, std::span<double> out);
std::vector<double> realize_round(const ProblemInstance& instance, RandomStream& rng);

// argmax of mu with uniform tie-breaking; computed once and cached.
ArmIndex optimal_arm(ProblemInstance& instance, RandomStream& rng);

// 1 with probability y. Throws std::invalid_argument if y is outside [0, 1].
int binarize_reward(double y, RandomStream& rng);

}  // namespace ebrm
