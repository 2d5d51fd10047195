#include "ebrm/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ebrm/parallel.hpp"

namespace ebrm {

RegretEstimate RegretEstimate::from_samples(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("RegretEstimate: no samples");
  RegretEstimate e;
  e.count = samples.size();
  double sum = 0.0;
  for (double x : samples) sum += x;
  e.mean = sum / static_cast<double>(e.count);
  if (e.count > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - e.mean) * (x - e.mean);
    e.std = std::sqrt(ss / static_cast<double>(e.count - 1));
    e.stderr = e.std / std::sqrt(static_cast<double>(e.count));
  }
  return e;
}

PolicyFactory factory_for(const PolicySpec& spec) {
  spec.validate();
  return [spec](const ProblemInstance& instance) { return make_policy(spec, instance); };
}

double run_episode(Policy& policy, const ProblemInstance& instance, std::size_t n,
                   RandomStream& reward_rng, RandomStream& policy_rng) {
  if (n < 1) throw std::invalid_argument("run_episode: n must be >= 1");
  const ArmIndex best = instance.cached_optimal ? *instance.cached_optimal
                                                : argmax_tiebreak(instance.mu, policy_rng);
  const bool binarize = policy.wants_binary_rewards() && !instance.binary_rewards();
  std::vector<double> rewards(instance.arms());
  double regret = 0.0;
  for (std::size_t t = 1; t <= n; ++t) {
    realize_round(instance, reward_rng, rewards);
    const ArmIndex arm = policy.select(t, policy_rng);
    if (arm >= rewards.size()) throw std::out_of_range("policy selected an invalid arm");
    const double y = rewards[arm];
    regret += rewards[best] - y;
    policy.update(arm, binarize ? binarize_reward(y, policy_rng) : y);
  }
  return regret;
}

double run_episode(const PolicySpec& spec, const ProblemInstance& instance, std::size_t n,
                   const RandomStream& episode_rng) {
  auto policy = make_policy(spec, instance);
  RandomStream rewards = episode_rng.child("rewards", 0);
  RandomStream choices = episode_rng.child("policy", 0);
  return run_episode(*policy, instance, n, rewards, choices);
}

EmpiricalRegret empirical_bayes_regret(const PolicyFactory& factory, const InstancePrior& prior,
                                       std::size_t s, std::size_t n, const RandomStream& rng,
                                       const EvaluationOptions& options) {
  if (s < 1) throw std::invalid_argument("empirical_bayes_regret: s must be >= 1");
  prior.validate();
  EmpiricalRegret out;
  out.regrets.resize(s);
  parallel_for(s, options.threads, [&](std::size_t j) {
    try {
      RandomStream instance_rng = rng.child("instance", static_cast<std::int64_t>(j));
      const ProblemInstance instance = sample_instance(prior, instance_rng);
      const RandomStream episode = rng.child("episode", static_cast<std::int64_t>(j));
      auto policy = factory(instance);
      RandomStream rewards = episode.child("rewards", 0);
      RandomStream choices = episode.child("policy", 0);
      out.regrets[j] = run_episode(*policy, instance, n, rewards, choices);
    } catch (const EpisodeError&) {
      throw;
    } catch (const std::exception& e) {
      throw EpisodeError(j, e.what());
    }
  });
  out.estimate = RegretEstimate::from_samples(out.regrets);
  return out;
}

EmpiricalRegret empirical_bayes_regret(const PolicySpec& spec, const InstancePrior& prior,
                                       std::size_t s, std::size_t n, const RandomStream& rng,
                                       const EvaluationOptions& options) {
  return empirical_bayes_regret(factory_for(spec), prior, s, n, rng, options);
}

std::vector<SweepPoint> sweep_gamma(const PolicySpec& base, const InstancePrior& prior,
                                    std::span<const double> grid, std::size_t s, std::size_t n,
                                    const RandomStream& rng, const EvaluationOptions& options) {
  if (grid.empty()) throw std::invalid_argument("sweep_gamma: empty grid");
  for (std::size_t g = 1; g < grid.size(); ++g)
    if (grid[g] < grid[g - 1]) throw std::invalid_argument("sweep_gamma: grid must be sorted");
  std::vector<SweepPoint> points;
  points.reserve(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const PolicySpec spec = base.with_gamma(grid[g]);
    const auto result = empirical_bayes_regret(spec, prior, s, n,
                                               rng.child("point", static_cast<std::int64_t>(g)),
                                               options);
    points.push_back({grid[g], result.estimate});
  }
  return points;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("make_grid: bad range");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i)
    grid.push_back(std::min(stop, start + static_cast<double>(i) * step));
  return grid;
}

}  // namespace ebrm
