#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ebrm/core.hpp"
#include "ebrm/environments.hpp"

namespace ebrm {

enum class PolicyKind { ucb1, bern_ts, lin_ucb, lin_ts, ucb_glm, glm_tsl };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);
bool is_posterior_sampling(PolicyKind kind);

// A_gamma: one tunable bandit algorithm. gamma scales the confidence width
// (UCB family) or the posterior standard deviation (sampling family).
struct PolicySpec {
  PolicyKind kind = PolicyKind::ucb1;
  double gamma = 1.0;
  std::size_t horizon = 10000;
  double lambda = 1.0;       // ridge of G_t for the structured policies
  double sigma = 0.5;        // noise scale in the LinUCB / UCB-GLM bonus
  double kappa = 0.25;       // UCB-GLM link-derivative constant
  double glm_ridge = 1e-6;   // IRLS / Laplace ridge
  double irls_tol = 1e-6;
  int irls_max_iter = 200;

  void validate() const;
  PolicySpec with_gamma(double g) const {
    PolicySpec s = *this;
    s.gamma = g;
    return s;
  }
};

class Policy {
 public:
  virtual ~Policy() = default;
  // t is the 1-based round index.
  virtual ArmIndex select(std::size_t t, RandomStream& rng) = 0;
  virtual void update(ArmIndex arm, double reward) = 0;
  // Policies that model Bernoulli rewards get binarized rewards on [0, 1]
  // environments.
  virtual bool wants_binary_rewards() const { return false; }
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const ProblemInstance& instance);

// U_t(i) = mean + gamma * sqrt(2 log(n) / pulls)  (delta = 1/n).
double ucb1_index(double mean, double pulls, double gamma, std::size_t horizon);

// Divides both Beta parameters by gamma^2. Throws std::invalid_argument for
// gamma <= 0 ("degenerate posterior").
std::pair<double, double> ts_width_transform(double alpha, double beta, double gamma);

// Round-independent radius g(n) (UCB kinds) or variance inflation g~(n)
// (sampling kinds), delta = 1/n:
//   lin_ucb:  sqrt(d log((1 + n d / (lambda d)) / delta)) + sqrt(lambda) sqrt(d) / sigma
//   ucb_glm:  sqrt((d / 2) log(1 + 2 n / d) + log(1 / delta))
//   lin_ts, glm_tsl:  9 d log(n / delta)
double confidence_radius(PolicyKind kind, std::size_t horizon, std::size_t dim,
                         const PolicySpec& params);

// Rounds of uniformly random pulls before the GLM policies fit an MLE.
std::size_t glm_warmup_rounds(std::size_t dim);

class Ucb1Policy final : public Policy {
 public:
  Ucb1Policy(std::size_t arms, double gamma, std::size_t horizon);
  ArmIndex select(std::size_t t, RandomStream& rng) override;
  void update(ArmIndex arm, double reward) override;

  const std::vector<double>& pulls() const { return pulls_; }
  const std::vector<double>& reward_sums() const { return sums_; }
  double index(ArmIndex arm) const;

 private:
  std::vector<double> pulls_, sums_, scores_;
  double width_;  // gamma * sqrt(2 log n)
};

class BernoulliTsPolicy final : public Policy {
 public:
  BernoulliTsPolicy(std::size_t arms, double gamma);
  ArmIndex select(std::size_t t, RandomStream& rng) override;
  void update(ArmIndex arm, double reward) override;
  bool wants_binary_rewards() const override { return true; }

  // Untransformed posterior Beta(S + 1, T - S + 1) of `arm`.
  std::pair<double, double> posterior(ArmIndex arm) const;
  const std::vector<double>& pulls() const { return pulls_; }
  const std::vector<double>& reward_sums() const { return sums_; }

 private:
  std::vector<double> pulls_, sums_, draws_;
  double inv_gamma_sq_;
};

// Shared state of LinUCB / LinTS: G = lambda I + sum x x^T maintained with its
// inverse, b = sum x y, theta = G^-1 b, plus per-arm caches x_i^T theta and
// x_i^T G^-1 x_i refreshed in O(K d) per update.
class LinearPolicyBase : public Policy {
 public:
  LinearPolicyBase(const Eigen::MatrixXd& features, double lambda);
  void update(ArmIndex arm, double reward) override;

  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::MatrixXd& gram_inverse() const { return gram_inv_; }
  const Eigen::VectorXd& theta_hat() const { return theta_; }
  const Eigen::VectorXd& arm_means() const { return means_; }
  const Eigen::VectorXd& arm_variances() const { return quad_; }

 protected:
  const Eigen::MatrixXd& features_;
  Eigen::MatrixXd gram_, gram_inv_;
  Eigen::VectorXd response_, theta_, means_, quad_;
  std::vector<double> scores_;
};

class LinUcbPolicy final : public LinearPolicyBase {
 public:
  LinUcbPolicy(const Eigen::MatrixXd& features, const PolicySpec& spec);
  ArmIndex select(std::size_t t, RandomStream& rng) override;
  double width() const { return width_; }

 private:
  double width_;  // gamma * sigma * g(n)
};

class LinTsPolicy final : public LinearPolicyBase {
 public:
  LinTsPolicy(const Eigen::MatrixXd& features, const PolicySpec& spec);
  ArmIndex select(std::size_t t, RandomStream& rng) override;
  // Posterior sample theta~ ~ N(theta_hat, gamma^2 g~(n) G^-1).
  Eigen::VectorXd sample_theta(RandomStream& rng) const;

 private:
  double scale_;  // gamma * sqrt(g~(n))
};

// Shared state of UCB-GLM / GLM-TSL. The pull history is stored grouped by arm
// (pull count and success count per feature row), which is a lossless summary
// for the logistic likelihood. The MLE is refit lazily before a post-warm-up
// selection, warm-started from the previous fit.
class GlmPolicyBase : public Policy {
 public:
  GlmPolicyBase(const Eigen::MatrixXd& features, const PolicySpec& spec);
  void update(ArmIndex arm, double reward) override;

  std::size_t rounds_observed() const { return observed_; }
  const Eigen::VectorXd& theta_hat();
  // H_t = ridge I + sum sigmoid'(x^T theta_hat) x x^T.
  const Eigen::MatrixXd& hessian();
  const Eigen::MatrixXd& gram_inverse() const { return gram_inv_; }

 protected:
  ArmIndex warmup_or_npos(std::size_t t, RandomStream& rng) const;
  void refit();

  const Eigen::MatrixXd& features_;
  PolicySpec spec_;
  std::size_t warmup_;
  std::vector<double> pulls_, successes_, scores_;
  std::size_t observed_ = 0;
  Eigen::MatrixXd gram_inv_, hessian_;
  Eigen::VectorXd theta_, quad_;
  bool dirty_ = true;
};

class UcbGlmPolicy final : public GlmPolicyBase {
 public:
  UcbGlmPolicy(const Eigen::MatrixXd& features, const PolicySpec& spec);
  ArmIndex select(std::size_t t, RandomStream& rng) override;
  void update(ArmIndex arm, double reward) override;
  double width() const { return width_; }

 private:
  double width_;  // gamma * (sigma / kappa) * g(n)
};

class GlmTslPolicy final : public GlmPolicyBase {
 public:
  GlmTslPolicy(const Eigen::MatrixXd& features, const PolicySpec& spec);
  ArmIndex select(std::size_t t, RandomStream& rng) override;

 private:
  double scale_;  // gamma * sqrt(g~(n))
};

}  // namespace ebrm
