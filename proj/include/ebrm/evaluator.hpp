#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebrm/core.hpp"
#include "ebrm/environments.hpp"
#include "ebrm/policies.hpp"

namespace ebrm {

struct RegretEstimate {
  double mean = 0.0;
  double std = 0.0;     // sample standard deviation (n - 1); 0 for a single sample
  double stderr = 0.0;  // std / sqrt(count)
  std::size_t count = 0;

  static RegretEstimate from_samples(std::span<const double> samples);
};

struct SweepPoint {
  double gamma = 0.0;
  RegretEstimate estimate;
};

// Raised when an episode fails; carries the instance index that failed.
class EpisodeError : public std::runtime_error {
 public:
  EpisodeError(std::size_t instance, const std::string& what)
      : std::runtime_error("instance " + std::to_string(instance) + ": " + what),
        instance_(instance) {}
  std::size_t instance() const { return instance_; }

 private:
  std::size_t instance_;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>(const ProblemInstance&)>;

PolicyFactory factory_for(const PolicySpec& spec);

// Random regret sum_t Y_{t,i*} - Y_{t,I_t} of one n-round episode. Rewards
// come from `reward_rng` (one K-tuple per round); selection randomness and
// reward binarization come from `policy_rng`. If the instance has no cached
// optimal arm, ties are resolved with `policy_rng`.
double run_episode(Policy& policy, const ProblemInstance& instance, std::size_t n,
                   RandomStream& reward_rng, RandomStream& policy_rng);

// Convenience form: rewards from child ("rewards", 0) and policy randomness
// from child ("policy", 0) of `episode_rng`.
double run_episode(const PolicySpec& spec, const ProblemInstance& instance, std::size_t n,
                   const RandomStream& episode_rng);

struct EvaluationOptions {
  std::size_t threads = 1;
};

struct EmpiricalRegret {
  RegretEstimate estimate;
  std::vector<double> regrets;  // one per instance, in instance order
};

// Samples s instances (instance j from rng.child("instance", j)) and runs one
// episode on each (episode j from rng.child("episode", j)).
EmpiricalRegret empirical_bayes_regret(const PolicyFactory& factory, const InstancePrior& prior,
                                       std::size_t s, std::size_t n, const RandomStream& rng,
                                       const EvaluationOptions& options = {});

EmpiricalRegret empirical_bayes_regret(const PolicySpec& spec, const InstancePrior& prior,
                                       std::size_t s, std::size_t n, const RandomStream& rng,
                                       const EvaluationOptions& options = {});

// One estimate per grid value; point g uses fresh instances from
// rng.child("point", g).
std::vector<SweepPoint> sweep_gamma(const PolicySpec& base, const InstancePrior& prior,
                                    std::span<const double> grid, std::size_t s, std::size_t n,
                                    const RandomStream& rng, const EvaluationOptions& options = {});

// {start, start + step, ...} up to `stop` inclusive (within 1e-9).
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace ebrm
