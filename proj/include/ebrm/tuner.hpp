#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ebrm/core.hpp"
#include "ebrm/evaluator.hpp"

namespace ebrm {

// Source of empirical Bayes regret estimates for A_gamma. The tuner and the
// validation harness only talk to this interface, so they run unchanged on
// bandit simulations and on synthetic regret curves.
class RegretModel {
 public:
  virtual ~RegretModel() = default;

  // Estimates at probe points a and b on the same s sampled instances.
  virtual std::pair<RegretEstimate, RegretEstimate> estimate_pair(double a, double b,
                                                                  std::size_t s,
                                                                  const RandomStream& rng) = 0;
  // Estimate at one gamma on s fresh instances.
  virtual RegretEstimate estimate(double gamma, std::size_t s, const RandomStream& rng) = 0;

  // Number of random-regret computations performed so far.
  std::size_t regret_computations() const { return computations_; }

 protected:
  std::size_t computations_ = 0;
};

// Bandit simulation behind RegretModel.
//
// estimate_pair draws instance k from rng.child("instance", k) once and
// evaluates both probes on it. Reward realizations are independent between
// the probes unless common_random_numbers is set, in which case the reward
// stream rng.child("episode", k).child("rewards", 0) is shared and only the
// policy streams differ. Probe values below gamma_floor are raised to it
// before evaluation (posterior-sampling policies are undefined at gamma = 0).
class BanditRegretModel final : public RegretModel {
 public:
  BanditRegretModel(PolicySpec base, InstancePrior prior, std::size_t horizon,
                    EvaluationOptions options = {}, bool common_random_numbers = false);

  std::pair<RegretEstimate, RegretEstimate> estimate_pair(double a, double b, std::size_t s,
                                                          const RandomStream& rng) override;
  RegretEstimate estimate(double gamma, std::size_t s, const RandomStream& rng) override;

  double effective_gamma(double gamma) const;
  static constexpr double kPosteriorGammaFloor = 0.02;

 private:
  PolicySpec base_;
  InstancePrior prior_;
  std::size_t horizon_;
  EvaluationOptions options_;
  bool crn_;
  double gamma_floor_;
};

// Synthetic curve: one random regret at gamma is mean(gamma) + U[-w, w].
class SyntheticRegretModel final : public RegretModel {
 public:
  SyntheticRegretModel(std::function<double(double)> mean, double noise_half_width);

  std::pair<RegretEstimate, RegretEstimate> estimate_pair(double a, double b, std::size_t s,
                                                          const RandomStream& rng) override;
  RegretEstimate estimate(double gamma, std::size_t s, const RandomStream& rng) override;

  // Standard deviation of one random regret: w / sqrt(3).
  double noise_std() const;

 private:
  std::vector<double> draw(double gamma, std::size_t s, RandomStream rng);

  std::function<double(double)> mean_;
  double half_width_;
};

struct Schedule {
  std::vector<std::size_t> sizes;  // s_l for l = 1..L

  std::size_t steps() const { return sizes.size(); }
  void validate() const;
};

// L = ceil(log(1 / (2 eps)) / log(3/2)),
// s_l = ceil(72 (3/2)^(2l) / m^2 * (log(1/delta) + log(4L))).
Schedule theory_schedule(double epsilon, double delta, double m);

// s_l = floor(s / (2L)) for every step. Throws if s < 2L.
Schedule budget_schedule(std::size_t s, std::size_t steps);

struct TunerStep {
  std::size_t step = 0;  // 1-based
  double lower = 0.0, upper = 1.0;  // interval entering the step
  double a = 0.0, b = 0.0;
  RegretEstimate at_a, at_b;
  double kept_lower = 0.0, kept_upper = 1.0;
};

struct TunerTrace {
  std::vector<TunerStep> steps;
  double gamma_hat = 0.5;
  std::size_t total_samples = 0;  // random-regret computations
};

// Ternary search on empirical Bayes regret. Step l uses rng.child("step", l).
// Elimination: if R_a >= R_b keep [a, J], else keep [I, b].
TunerTrace ternary_ebrm(RegretModel& model, const Schedule& schedule, const RandomStream& rng);

struct UniformResult {
  double gamma_hat = 0.0;
  std::vector<SweepPoint> points;
  std::size_t samples_per_point = 0;
  std::size_t total_samples = 0;
};

// Grid {0, eps, ..., 1}; each point estimated from floor(eps * s) fresh
// instances (point g from rng.child("point", g)); lowest estimate wins, ties
// to the smaller gamma.
UniformResult uniform_tune(RegretModel& model, double epsilon, std::size_t s,
                           const RandomStream& rng);

}  // namespace ebrm
