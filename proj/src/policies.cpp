#include "ebrm/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ebrm/numerics.hpp"

namespace ebrm {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ucb1: return "ucb1";
    case PolicyKind::bern_ts: return "bern_ts";
    case PolicyKind::lin_ucb: return "lin_ucb";
    case PolicyKind::lin_ts: return "lin_ts";
    case PolicyKind::ucb_glm: return "ucb_glm";
    case PolicyKind::glm_tsl: return "glm_tsl";
  }
  return "?";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  for (auto k : {PolicyKind::ucb1, PolicyKind::bern_ts, PolicyKind::lin_ucb, PolicyKind::lin_ts,
                 PolicyKind::ucb_glm, PolicyKind::glm_tsl})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown policy kind '" + name + "'");
}

bool is_posterior_sampling(PolicyKind kind) {
  return kind == PolicyKind::bern_ts || kind == PolicyKind::lin_ts || kind == PolicyKind::glm_tsl;
}

void PolicySpec::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(glm_ridge >= 0.0)) throw std::invalid_argument("glm_ridge must be non-negative");
  if (!(irls_tol > 0.0)) throw std::invalid_argument("irls_tol must be positive");
  if (irls_max_iter < 1) throw std::invalid_argument("irls_max_iter must be >= 1");
}

double ucb1_index(double mean, double pulls, double gamma, std::size_t horizon) {
  return mean + gamma * std::sqrt(2.0 * std::log(static_cast<double>(horizon)) / pulls);
}

std::pair<double, double> ts_width_transform(double alpha, double beta, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("degenerate posterior: gamma must be positive");
  const double g2 = gamma * gamma;
  return {alpha / g2, beta / g2};
}

double confidence_radius(PolicyKind kind, std::size_t horizon, std::size_t dim,
                         const PolicySpec& params) {
  const double n = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  const double log_inv_delta = std::log(n);
  switch (kind) {
    case PolicyKind::lin_ucb: {
      const double lambda = params.lambda;
      return std::sqrt(d * (std::log(1.0 + n * d / (lambda * d)) + log_inv_delta)) +
             std::sqrt(lambda) * std::sqrt(d) / params.sigma;
    }
    case PolicyKind::ucb_glm:
      return std::sqrt(0.5 * d * std::log(1.0 + 2.0 * n / d) + log_inv_delta);
    case PolicyKind::lin_ts:
    case PolicyKind::glm_tsl:
      return 9.0 * d * (std::log(n) + log_inv_delta);
    default:
      throw std::invalid_argument("confidence_radius: not a structured policy");
  }
}

std::size_t glm_warmup_rounds(std::size_t dim) { return std::max<std::size_t>(dim, 10); }

// ---------------------------------------------------------------- UCB1

Ucb1Policy::Ucb1Policy(std::size_t arms, double gamma, std::size_t horizon)
    : pulls_(arms, 0.0),
      sums_(arms, 0.0),
      scores_(arms, 0.0),
      width_(gamma * std::sqrt(2.0 * std::log(static_cast<double>(horizon)))) {}

double Ucb1Policy::index(ArmIndex arm) const {
  return sums_[arm] / pulls_[arm] + width_ / std::sqrt(pulls_[arm]);
}

ArmIndex Ucb1Policy::select(std::size_t /*t*/, RandomStream& rng) {
  for (std::size_t i = 0; i < pulls_.size(); ++i)
    if (pulls_[i] == 0.0) return i;
  for (std::size_t i = 0; i < pulls_.size(); ++i) scores_[i] = index(i);
  return argmax_tiebreak(scores_, rng);
}

void Ucb1Policy::update(ArmIndex arm, double reward) {
  pulls_[arm] += 1.0;
  sums_[arm] += reward;
}

// ---------------------------------------------------------------- Bernoulli TS

BernoulliTsPolicy::BernoulliTsPolicy(std::size_t arms, double gamma)
    : pulls_(arms, 0.0), sums_(arms, 0.0), draws_(arms, 0.0) {
  const auto [a, b] = ts_width_transform(1.0, 1.0, gamma);
  (void)b;
  inv_gamma_sq_ = a;
}

std::pair<double, double> BernoulliTsPolicy::posterior(ArmIndex arm) const {
  return {sums_[arm] + 1.0, pulls_[arm] - sums_[arm] + 1.0};
}

ArmIndex BernoulliTsPolicy::select(std::size_t /*t*/, RandomStream& rng) {
  for (std::size_t i = 0; i < pulls_.size(); ++i) {
    const auto [alpha, beta] = posterior(i);
    draws_[i] = rng.beta(alpha * inv_gamma_sq_, beta * inv_gamma_sq_);
  }
  return argmax_tiebreak(draws_, rng);
}

void BernoulliTsPolicy::update(ArmIndex arm, double reward) {
  pulls_[arm] += 1.0;
  sums_[arm] += reward;
}

// ---------------------------------------------------------------- linear

LinearPolicyBase::LinearPolicyBase(const Eigen::MatrixXd& features, double lambda)
    : features_(features),
      scores_(static_cast<std::size_t>(features.rows()), 0.0) {
  const auto d = features.cols();
  gram_ = lambda * Eigen::MatrixXd::Identity(d, d);
  gram_inv_ = Eigen::MatrixXd::Identity(d, d) / lambda;
  response_ = Eigen::VectorXd::Zero(d);
  theta_ = Eigen::VectorXd::Zero(d);
  means_ = Eigen::VectorXd::Zero(features.rows());
  quad_ = features.rowwise().squaredNorm() / lambda;
}

void LinearPolicyBase::update(ArmIndex arm, double reward) {
  const Eigen::VectorXd x = features_.row(static_cast<Eigen::Index>(arm)).transpose();
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0);
  gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
  double denom = 0.0;
  const Eigen::VectorXd u = sherman_morrison_inplace(gram_inv_, x, denom);
  const Eigen::VectorXd proj = features_ * u;
  quad_.array() -= proj.array().square() / denom;
  quad_ = quad_.cwiseMax(0.0);
  response_ += reward * x;
  theta_.noalias() = gram_inv_ * response_;
  means_.noalias() = features_ * theta_;
}

LinUcbPolicy::LinUcbPolicy(const Eigen::MatrixXd& features, const PolicySpec& spec)
    : LinearPolicyBase(features, spec.lambda),
      width_(spec.gamma * spec.sigma *
             confidence_radius(PolicyKind::lin_ucb, spec.horizon,
                               static_cast<std::size_t>(features.cols()), spec)) {}

ArmIndex LinUcbPolicy::select(std::size_t /*t*/, RandomStream& rng) {
  for (Eigen::Index i = 0; i < means_.size(); ++i)
    scores_[static_cast<std::size_t>(i)] = means_(i) + width_ * std::sqrt(quad_(i));
  return argmax_tiebreak(scores_, rng);
}

LinTsPolicy::LinTsPolicy(const Eigen::MatrixXd& features, const PolicySpec& spec)
    : LinearPolicyBase(features, spec.lambda),
      scale_(spec.gamma * std::sqrt(confidence_radius(PolicyKind::lin_ts, spec.horizon,
                                                      static_cast<std::size_t>(features.cols()),
                                                      spec))) {}

Eigen::VectorXd LinTsPolicy::sample_theta(RandomStream& rng) const {
  if (scale_ == 0.0) return theta_;
  const Eigen::MatrixXd chol = cholesky(gram_inv_);
  return mvn_sample(theta_, scale_ * chol, rng);
}

ArmIndex LinTsPolicy::select(std::size_t /*t*/, RandomStream& rng) {
  const Eigen::VectorXd values = features_ * sample_theta(rng);
  return argmax_tiebreak(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())),
                         rng);
}

// ---------------------------------------------------------------- GLM

GlmPolicyBase::GlmPolicyBase(const Eigen::MatrixXd& features, const PolicySpec& spec)
    : features_(features),
      spec_(spec),
      warmup_(glm_warmup_rounds(static_cast<std::size_t>(features.cols()))),
      pulls_(static_cast<std::size_t>(features.rows()), 0.0),
      successes_(static_cast<std::size_t>(features.rows()), 0.0),
      scores_(static_cast<std::size_t>(features.rows()), 0.0) {
  const auto d = features.cols();
  gram_inv_ = Eigen::MatrixXd::Identity(d, d) / spec.lambda;
  quad_ = features.rowwise().squaredNorm() / spec.lambda;
  theta_ = Eigen::VectorXd::Zero(d);
  hessian_ = spec.glm_ridge * Eigen::MatrixXd::Identity(d, d);
}

void GlmPolicyBase::update(ArmIndex arm, double reward) {
  pulls_[arm] += 1.0;
  successes_[arm] += reward;
  ++observed_;
  dirty_ = true;
}

void GlmPolicyBase::refit() {
  if (!dirty_) return;
  const GroupedBinaryData data{&features_, pulls_, successes_};
  IrlsResult fit = irls_logistic(data, static_cast<std::size_t>(features_.cols()), spec_.glm_ridge,
                                 spec_.irls_tol, spec_.irls_max_iter, &theta_);
  theta_ = std::move(fit.theta);
  hessian_ = std::move(fit.hessian);
  dirty_ = false;
}

const Eigen::VectorXd& GlmPolicyBase::theta_hat() {
  refit();
  return theta_;
}

const Eigen::MatrixXd& GlmPolicyBase::hessian() {
  refit();
  return hessian_;
}

ArmIndex GlmPolicyBase::warmup_or_npos(std::size_t t, RandomStream& rng) const {
  if (t <= warmup_) return static_cast<ArmIndex>(rng.uniform_int(pulls_.size()));
  return static_cast<ArmIndex>(-1);
}

UcbGlmPolicy::UcbGlmPolicy(const Eigen::MatrixXd& features, const PolicySpec& spec)
    : GlmPolicyBase(features, spec),
      width_(spec.gamma * (spec.sigma / spec.kappa) *
             confidence_radius(PolicyKind::ucb_glm, spec.horizon,
                               static_cast<std::size_t>(features.cols()), spec)) {}

void UcbGlmPolicy::update(ArmIndex arm, double reward) {
  GlmPolicyBase::update(arm, reward);
  const Eigen::VectorXd x = features_.row(static_cast<Eigen::Index>(arm)).transpose();
  double denom = 0.0;
  const Eigen::VectorXd u = sherman_morrison_inplace(gram_inv_, x, denom);
  const Eigen::VectorXd proj = features_ * u;
  quad_.array() -= proj.array().square() / denom;
  quad_ = quad_.cwiseMax(0.0);
}

ArmIndex UcbGlmPolicy::select(std::size_t t, RandomStream& rng) {
  if (const ArmIndex a = warmup_or_npos(t, rng); a != static_cast<ArmIndex>(-1)) return a;
  refit();
  const Eigen::VectorXd means = features_ * theta_;
  for (Eigen::Index i = 0; i < means.size(); ++i)
    scores_[static_cast<std::size_t>(i)] = means(i) + width_ * std::sqrt(quad_(i));
  return argmax_tiebreak(scores_, rng);
}

GlmTslPolicy::GlmTslPolicy(const Eigen::MatrixXd& features, const PolicySpec& spec)
    : GlmPolicyBase(features, spec),
      scale_(spec.gamma * std::sqrt(confidence_radius(PolicyKind::glm_tsl, spec.horizon,
                                                      static_cast<std::size_t>(features.cols()),
                                                      spec))) {}

ArmIndex GlmTslPolicy::select(std::size_t t, RandomStream& rng) {
  if (const ArmIndex a = warmup_or_npos(t, rng); a != static_cast<ArmIndex>(-1)) return a;
  refit();
  Eigen::VectorXd theta = theta_;
  if (scale_ != 0.0) {
    // Covariance gamma^2 g~(n) H^-1; its Cholesky factor comes from inverting H.
    Eigen::LLT<Eigen::MatrixXd> llt(hessian_);
    if (llt.info() != Eigen::Success) throw NumericsError("degenerate Hessian");
    Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(theta.size(), theta.size()));
    theta = mvn_sample(theta_, scale_ * cholesky(cov), rng);
  }
  const Eigen::VectorXd values = features_ * theta;
  for (Eigen::Index i = 0; i < values.size(); ++i) scores_[static_cast<std::size_t>(i)] = values(i);
  return argmax_tiebreak(scores_, rng);
}

// ---------------------------------------------------------------- factory

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const ProblemInstance& instance) {
  spec.validate();
  const bool structured = instance.kind == InstanceKind::linear ||
                          instance.kind == InstanceKind::logistic;
  switch (spec.kind) {
    case PolicyKind::ucb1:
      return std::make_unique<Ucb1Policy>(instance.arms(), spec.gamma, spec.horizon);
    case PolicyKind::bern_ts:
      if (instance.kind == InstanceKind::linear)
        throw std::invalid_argument("bern_ts needs rewards in [0, 1]");
      return std::make_unique<BernoulliTsPolicy>(instance.arms(), spec.gamma);
    case PolicyKind::lin_ucb:
    case PolicyKind::lin_ts:
    case PolicyKind::ucb_glm:
    case PolicyKind::glm_tsl:
      if (!structured) throw std::invalid_argument(to_string(spec.kind) + " needs arm features");
      break;
  }
  switch (spec.kind) {
    case PolicyKind::lin_ucb: return std::make_unique<LinUcbPolicy>(instance.features, spec);
    case PolicyKind::lin_ts: return std::make_unique<LinTsPolicy>(instance.features, spec);
    case PolicyKind::ucb_glm: return std::make_unique<UcbGlmPolicy>(instance.features, spec);
    default: return std::make_unique<GlmTslPolicy>(instance.features, spec);
  }
}

}  // namespace ebrm
