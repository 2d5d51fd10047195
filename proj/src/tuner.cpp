#include "ebrm/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ebrm/parallel.hpp"

namespace ebrm {

BanditRegretModel::BanditRegretModel(PolicySpec base, InstancePrior prior, std::size_t horizon,
                                     EvaluationOptions options, bool common_random_numbers)
    : base_(std::move(base)),
      prior_(std::move(prior)),
      horizon_(horizon),
      options_(options),
      crn_(common_random_numbers),
      gamma_floor_(is_posterior_sampling(base_.kind) ? kPosteriorGammaFloor : 0.0) {
  base_.horizon = horizon;
  base_.validate();
  prior_.validate();
}

double BanditRegretModel::effective_gamma(double gamma) const {
  return std::max(gamma, gamma_floor_);
}

std::pair<RegretEstimate, RegretEstimate> BanditRegretModel::estimate_pair(
    double a, double b, std::size_t s, const RandomStream& rng) {
  if (s < 1) throw std::invalid_argument("estimate_pair: s must be >= 1");
  const PolicySpec specs[2] = {base_.with_gamma(effective_gamma(a)),
                               base_.with_gamma(effective_gamma(b))};
  std::vector<ProblemInstance> instances(s);
  parallel_for(s, options_.threads, [&](std::size_t k) {
    RandomStream instance_rng = rng.child("instance", static_cast<std::int64_t>(k));
    instances[k] = sample_instance(prior_, instance_rng);
  });
  std::vector<double> regrets(2 * s);
  parallel_for(2 * s, options_.threads, [&](std::size_t task) {
    const std::size_t k = task / 2;
    const std::size_t probe = task % 2;
    try {
      const RandomStream episode = rng.child("episode", static_cast<std::int64_t>(k));
      const RandomStream probe_episode = episode.child("probe", static_cast<std::int64_t>(probe));
      RandomStream rewards = crn_ ? episode.child("rewards", 0) : probe_episode.child("rewards", 0);
      RandomStream choices = probe_episode.child("policy", 0);
      auto policy = make_policy(specs[probe], instances[k]);
      regrets[probe * s + k] = run_episode(*policy, instances[k], horizon_, rewards, choices);
    } catch (const std::exception& e) {
      throw EpisodeError(k, e.what());
    }
  });
  computations_ += 2 * s;
  return {RegretEstimate::from_samples(std::span<const double>(regrets.data(), s)),
          RegretEstimate::from_samples(std::span<const double>(regrets.data() + s, s))};
}

RegretEstimate BanditRegretModel::estimate(double gamma, std::size_t s, const RandomStream& rng) {
  const auto result = empirical_bayes_regret(base_.with_gamma(effective_gamma(gamma)), prior_, s,
                                             horizon_, rng, options_);
  computations_ += s;
  return result.estimate;
}

SyntheticRegretModel::SyntheticRegretModel(std::function<double(double)> mean,
                                           double noise_half_width)
    : mean_(std::move(mean)), half_width_(noise_half_width) {
  if (!(noise_half_width >= 0.0)) throw std::invalid_argument("noise half-width must be >= 0");
}

double SyntheticRegretModel::noise_std() const { return half_width_ / std::sqrt(3.0); }

std::vector<double> SyntheticRegretModel::draw(double gamma, std::size_t s, RandomStream rng) {
  std::vector<double> out(s);
  const double m = mean_(gamma);
  for (auto& x : out) x = m + half_width_ * (2.0 * rng.uniform() - 1.0);
  computations_ += s;
  return out;
}

std::pair<RegretEstimate, RegretEstimate> SyntheticRegretModel::estimate_pair(
    double a, double b, std::size_t s, const RandomStream& rng) {
  const auto ra = draw(a, s, rng.child("probe", 0));
  const auto rb = draw(b, s, rng.child("probe", 1));
  return {RegretEstimate::from_samples(ra), RegretEstimate::from_samples(rb)};
}

RegretEstimate SyntheticRegretModel::estimate(double gamma, std::size_t s,
                                              const RandomStream& rng) {
  return RegretEstimate::from_samples(draw(gamma, s, rng));
}

void Schedule::validate() const {
  if (sizes.empty()) throw std::invalid_argument("schedule needs at least one step");
  for (auto s : sizes)
    if (s < 1) throw std::invalid_argument("schedule sample sizes must be >= 1");
}

Schedule theory_schedule(double epsilon, double delta, double m) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (!(m > 0.0)) throw std::invalid_argument("m must be positive");
  const double raw_steps = std::log(1.0 / (2.0 * epsilon)) / std::log(1.5);
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(raw_steps)));
  const double log_term = std::log(1.0 / delta) + std::log(4.0 * static_cast<double>(steps));
  Schedule schedule;
  for (std::size_t l = 1; l <= steps; ++l) {
    const double s = 72.0 * std::pow(1.5, 2.0 * static_cast<double>(l)) / (m * m) * log_term;
    schedule.sizes.push_back(static_cast<std::size_t>(std::ceil(s)));
  }
  return schedule;
}

Schedule budget_schedule(std::size_t s, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("budget_schedule: steps must be >= 1");
  if (s < 2 * steps) throw std::invalid_argument("budget_schedule: budget s must be >= 2L");
  return Schedule{std::vector<std::size_t>(steps, s / (2 * steps))};
}

TunerTrace ternary_ebrm(RegretModel& model, const Schedule& schedule, const RandomStream& rng) {
  schedule.validate();
  TunerTrace trace;
  double lower = 0.0, upper = 1.0;
  const std::size_t before = model.regret_computations();
  for (std::size_t l = 1; l <= schedule.steps(); ++l) {
    TunerStep step;
    step.step = l;
    step.lower = lower;
    step.upper = upper;
    step.a = (2.0 * lower + upper) / 3.0;
    step.b = (lower + 2.0 * upper) / 3.0;
    std::tie(step.at_a, step.at_b) = model.estimate_pair(
        step.a, step.b, schedule.sizes[l - 1], rng.child("step", static_cast<std::int64_t>(l)));
    if (step.at_a.mean >= step.at_b.mean)
      lower = step.a;
    else
      upper = step.b;
    step.kept_lower = lower;
    step.kept_upper = upper;
    trace.steps.push_back(step);
  }
  trace.gamma_hat = 0.5 * (lower + upper);
  trace.total_samples = model.regret_computations() - before;
  return trace;
}

UniformResult uniform_tune(RegretModel& model, double epsilon, std::size_t s,
                           const RandomStream& rng) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  const auto per_point = static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(s) + 1e-9));
  if (per_point == 0) throw std::invalid_argument("budget too small for grid");
  std::vector<double> grid = make_grid(0.0, 1.0, epsilon);
  if (grid.back() < 1.0 - 1e-9) grid.push_back(1.0);

  UniformResult result;
  result.samples_per_point = per_point;
  const std::size_t before = model.regret_computations();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const RegretEstimate e =
        model.estimate(grid[g], per_point, rng.child("point", static_cast<std::int64_t>(g)));
    result.points.push_back({grid[g], e});
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < result.points.size(); ++g)
    if (result.points[g].estimate.mean < result.points[best].estimate.mean) best = g;
  result.gamma_hat = result.points[best].gamma;
  result.total_samples = model.regret_computations() - before;
  return result;
}

}  // namespace ebrm
