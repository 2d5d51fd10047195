#include "ebrm/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "ebrm/evaluator.hpp"
#include "ebrm/gittins.hpp"
#include "ebrm/tuner.hpp"
#include "ebrm/validation.hpp"

#ifndef EBRM_VERSION
#define EBRM_VERSION "unknown"
#endif

namespace ebrm {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::sweep: return "sweep";
    case Mode::tune_ternary: return "tune_ternary";
    case Mode::tune_uniform: return "tune_uniform";
    case Mode::gittins_compare: return "gittins_compare";
    case Mode::validate: return "validate";
  }
  return "?";
}

Mode mode_from_string(const std::string& name) {
  for (Mode m : {Mode::sweep, Mode::tune_ternary, Mode::tune_uniform, Mode::gittins_compare,
                 Mode::validate})
    if (name == to_string(m)) return m;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

namespace {

// Reads one mapping section and rejects keys it was not asked about.
class Section {
 public:
  Section(const YAML::Node& node, std::string name, const std::string& source)
      : node_(node), name_(std::move(name)), source_(source) {
    if (node_ && !node_.IsMap()) fail(node_, "expected a mapping");
  }

  template <typename T>
  void read(const std::string& key, T& target) {
    seen_.insert(key);
    if (!node_) return;
    const YAML::Node value = node_[key];
    if (!value) return;
    try {
      target = value.as<T>();
    } catch (const YAML::Exception&) {
      fail(value, key, "cannot parse value '" + scalar(value) + "'");
    }
  }

  // Parses the value with `convert`, reporting its exceptions against the key.
  template <typename T, typename F>
  void read_with(const std::string& key, T& target, F convert) {
    std::string text;
    read(key, text);
    if (!node_ || !node_[key]) return;
    try {
      target = convert(text);
    } catch (const std::exception& e) {
      fail(node_[key], key, e.what());
    }
  }

  YAML::Node child(const std::string& key) {
    seen_.insert(key);
    return node_ ? node_[key] : YAML::Node();
  }

  bool has(const std::string& key) const { return node_ && node_[key]; }

  void finish() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(kv.first, key, "unknown key");
    }
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& key,
                         const std::string& problem) const {
    throw ConfigError(location(at) + ": " + field(key) + ": " + problem);
  }
  [[noreturn]] void fail(const YAML::Node& at, const std::string& problem) const {
    throw ConfigError(location(at) + ": " + name_ + ": " + problem);
  }
  // Error against the section itself (cross-field checks).
  [[noreturn]] void fail_here(const std::string& key, const std::string& problem) const {
    throw ConfigError((node_ ? location(node_) : source_) + ": " + field(key) + ": " + problem);
  }

 private:
  std::string field(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }
  std::string location(const YAML::Node& at) const {
    return source_ + ":" + std::to_string(at.Mark().line + 1);
  }
  static std::string scalar(const YAML::Node& n) { return n.IsScalar() ? n.Scalar() : "<non-scalar>"; }

  YAML::Node node_;
  std::string name_;
  const std::string& source_;
  std::set<std::string> seen_;
};

InstancePrior prior_preset(const std::string& name) {
  if (name == "warm_up") return InstancePrior::warm_up();
  if (name == "bernoulli_k10") return InstancePrior::bernoulli_k10();
  if (name == "beta_k10") return InstancePrior::beta_k10();
  if (name == "linear_k100") return InstancePrior::linear_k100();
  if (name == "logistic_k100") return InstancePrior::logistic_k100();
  if (name == "gittins_bernoulli") return InstancePrior::gittins_two_point(false);
  if (name == "gittins_beta") return InstancePrior::gittins_two_point(true);
  throw std::invalid_argument("unknown preset '" + name + "'");
}

void parse_prior(Section& s, InstancePrior& prior) {
  if (s.has("preset")) {
    s.read_with("preset", prior, prior_preset);
  } else {
    s.child("preset");
  }
  s.read_with("family", prior.family, prior_family_from_string);
  s.read("arms", prior.arms);
  s.read("dim", prior.dim);
  s.read("v", prior.v);
  s.read("sigma", prior.sigma);
  s.read("first", prior.first);
  s.read("second", prior.second);
  s.read("beta_rewards", prior.two_point_beta_rewards);
  s.finish();
  try {
    prior.validate();
  } catch (const std::exception& e) {
    s.fail_here("", e.what());
  }
}

void parse_params(Section& s, PolicySpec& p) {
  s.read("lambda", p.lambda);
  s.read("sigma", p.sigma);
  s.read("kappa", p.kappa);
  s.read("glm_ridge", p.glm_ridge);
  s.read("irls_tol", p.irls_tol);
  s.read("irls_max_iter", p.irls_max_iter);
  s.finish();
}

ScheduleKind schedule_from_string(const std::string& name) {
  if (name == "budget") return ScheduleKind::budget;
  if (name == "theory") return ScheduleKind::theory;
  throw std::invalid_argument("unknown schedule '" + name + "' (budget or theory)");
}

const char* to_string(ScheduleKind kind) {
  return kind == ScheduleKind::budget ? "budget" : "theory";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError(source + ":1: empty config");

  ExperimentConfig c;
  c.source = source;
  Section top(root, "", c.source);
  top.read_with("mode", c.mode, mode_from_string);
  top.read("seed", c.seed);
  top.read("threads", c.threads);
  top.read("output", c.output);
  top.read("horizon", c.horizon);
  if (top.has("policies")) {
    std::vector<std::string> names;
    top.read("policies", names);
    c.policies.clear();
    for (const auto& name : names) {
      try {
        c.policies.push_back(policy_kind_from_string(name));
      } catch (const std::exception& e) {
        top.fail(root["policies"], "policies", e.what());
      }
    }
  } else {
    top.child("policies");
  }

  Section prior(top.child("prior"), "prior", c.source);
  parse_prior(prior, c.prior);
  Section params(top.child("policy_params"), "policy_params", c.source);
  parse_params(params, c.params);

  Section sweep(top.child("sweep"), "sweep", c.source);
  sweep.read("start", c.sweep.start);
  sweep.read("stop", c.sweep.stop);
  sweep.read("step", c.sweep.step);
  sweep.read("instances", c.sweep.instances);
  sweep.finish();

  Section ternary(top.child("ternary"), "ternary", c.source);
  ternary.read_with("schedule", c.ternary.schedule, schedule_from_string);
  ternary.read("steps", c.ternary.steps);
  ternary.read("budget", c.ternary.budget);
  ternary.read("epsilon", c.ternary.epsilon);
  ternary.read("delta", c.ternary.delta);
  ternary.read("m", c.ternary.m);
  ternary.read("common_random_numbers", c.ternary.common_random_numbers);
  ternary.finish();

  Section uniform(top.child("uniform"), "uniform", c.source);
  uniform.read("epsilon", c.uniform.epsilon);
  uniform.read("budget", c.uniform.budget);
  uniform.finish();

  Section evaluation(top.child("evaluation"), "evaluation", c.source);
  evaluation.read("instances", c.evaluation.instances);
  evaluation.read("replications", c.evaluation.replications);
  evaluation.finish();

  Section gittins(top.child("gittins"), "gittins", c.source);
  gittins.read("tol", c.gittins.tol);
  gittins.read("cache", c.gittins.cache);
  gittins.finish();

  Section validate(top.child("validate"), "validate", c.source);
  if (validate.has("gamma_star")) {
    double g = 0.0;
    validate.read("gamma_star", g);
    c.validate.gamma_star = g;
  } else {
    validate.child("gamma_star");
  }
  validate.read("fine_step", c.validate.fine_step);
  validate.read("fine_instances", c.validate.fine_instances);
  validate.read("a_points", c.validate.a_points);
  validate.read("instances", c.validate.instances);
  validate.finish();

  top.finish();
  c.check();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

void ExperimentConfig::check() const {
  auto bad = [&](const std::string& field, const std::string& problem) {
    throw ConfigError(source + ": " + field + ": " + problem);
  };
  if (horizon < 1) bad("horizon", "must be >= 1");
  if (threads < 1) bad("threads", "must be >= 1");
  if (policies.empty() && mode != Mode::gittins_compare) bad("policies", "must not be empty");
  for (PolicyKind kind : policies) {
    PolicySpec s = params;
    s.kind = kind;
    s.horizon = horizon;
    try {
      s.validate();
    } catch (const std::exception& e) {
      bad("policy_params", e.what());
    }
    const bool structured = kind == PolicyKind::lin_ucb || kind == PolicyKind::lin_ts ||
                            kind == PolicyKind::ucb_glm || kind == PolicyKind::glm_tsl;
    const bool structured_prior = prior.family == PriorFamily::linear_uniform ||
                                  prior.family == PriorFamily::logistic_uniform;
    if (structured != structured_prior)
      bad("policies", to_string(kind) + " does not apply to prior family " + to_string(prior.family));
  }
  if (mode == Mode::sweep || mode == Mode::gittins_compare) {
    if (!(sweep.step > 0.0)) bad("sweep.step", "must be positive");
    if (!(sweep.start >= 0.0 && sweep.start <= sweep.stop && sweep.stop <= 1.0))
      bad("sweep", "need 0 <= start <= stop <= 1");
    if (sweep.instances < 1) bad("sweep.instances", "must be >= 1");
  }
  if (mode == Mode::tune_ternary || mode == Mode::tune_uniform) {
    if (evaluation.instances < 1) bad("evaluation.instances", "must be >= 1");
    if (evaluation.replications < 1) bad("evaluation.replications", "must be >= 1");
  }
  if (mode == Mode::tune_ternary) {
    if (ternary.schedule == ScheduleKind::budget) {
      if (ternary.steps < 1) bad("ternary.steps", "must be >= 1");
      if (ternary.budget < 2 * ternary.steps) bad("ternary.budget", "must be >= 2 * steps");
    } else {
      if (!(ternary.epsilon > 0.0 && ternary.epsilon <= 1.0)) bad("ternary.epsilon", "must lie in (0, 1]");
      if (!(ternary.delta > 0.0 && ternary.delta <= 1.0)) bad("ternary.delta", "must lie in (0, 1]");
      if (!(ternary.m > 0.0)) bad("ternary.m", "must be positive");
    }
  }
  if (mode == Mode::tune_uniform) {
    if (!(uniform.epsilon > 0.0 && uniform.epsilon <= 1.0)) bad("uniform.epsilon", "must lie in (0, 1]");
    if (std::floor(uniform.epsilon * static_cast<double>(uniform.budget) + 1e-9) < 1.0)
      bad("uniform.budget", "budget too small for grid");
  }
  if (mode == Mode::gittins_compare) {
    if (!(gittins.tol > 0.0)) bad("gittins.tol", "must be positive");
    if (prior.family != PriorFamily::two_point && prior.family != PriorFamily::beta_means &&
        prior.family != PriorFamily::beta_rewards)
      bad("prior.family", "gittins_compare needs a Bernoulli or Beta reward prior");
  }
  if (mode == Mode::validate) {
    if (!(validate.fine_step > 0.0 && validate.fine_step < 1.0)) bad("validate.fine_step", "must lie in (0, 1)");
    if (validate.a_points < 2) bad("validate.a_points", "must be >= 2");
    if (validate.instances < 2) bad("validate.instances", "must be >= 2");
    if (validate.fine_instances < 1) bad("validate.fine_instances", "must be >= 1");
    if (validate.gamma_star && !(*validate.gamma_star > validate.fine_step && *validate.gamma_star <= 1.0))
      bad("validate.gamma_star", "must lie in (fine_step, 1]");
  }
}

std::string ExperimentConfig::canonical_yaml() const {
  YAML::Emitter e;
  e.SetDoublePrecision(15);
  e << YAML::BeginMap;
  e << YAML::Key << "mode" << YAML::Value << to_string(mode);
  e << YAML::Key << "seed" << YAML::Value << seed;
  e << YAML::Key << "horizon" << YAML::Value << horizon;
  e << YAML::Key << "policies" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto k : policies) e << to_string(k);
  e << YAML::EndSeq;
  e << YAML::Key << "prior" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "family" << YAML::Value << to_string(prior.family);
  e << YAML::Key << "arms" << YAML::Value << prior.arms;
  e << YAML::Key << "dim" << YAML::Value << prior.dim;
  e << YAML::Key << "v" << YAML::Value << prior.v;
  e << YAML::Key << "sigma" << YAML::Value << prior.sigma;
  e << YAML::Key << "first" << YAML::Value << YAML::Flow << prior.first;
  e << YAML::Key << "second" << YAML::Value << YAML::Flow << prior.second;
  e << YAML::Key << "beta_rewards" << YAML::Value << prior.two_point_beta_rewards;
  e << YAML::EndMap;
  e << YAML::Key << "policy_params" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "lambda" << YAML::Value << params.lambda;
  e << YAML::Key << "sigma" << YAML::Value << params.sigma;
  e << YAML::Key << "kappa" << YAML::Value << params.kappa;
  e << YAML::Key << "glm_ridge" << YAML::Value << params.glm_ridge;
  e << YAML::Key << "irls_tol" << YAML::Value << params.irls_tol;
  e << YAML::Key << "irls_max_iter" << YAML::Value << params.irls_max_iter;
  e << YAML::EndMap;
  switch (mode) {
    case Mode::sweep:
    case Mode::gittins_compare:
      e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
      e << YAML::Key << "start" << YAML::Value << sweep.start;
      e << YAML::Key << "stop" << YAML::Value << sweep.stop;
      e << YAML::Key << "step" << YAML::Value << sweep.step;
      e << YAML::Key << "instances" << YAML::Value << sweep.instances;
      e << YAML::EndMap;
      if (mode == Mode::gittins_compare) {
        e << YAML::Key << "gittins" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "tol" << YAML::Value << gittins.tol;
        e << YAML::EndMap;
      }
      break;
    case Mode::tune_ternary:
      e << YAML::Key << "ternary" << YAML::Value << YAML::BeginMap;
      e << YAML::Key << "schedule" << YAML::Value << to_string(ternary.schedule);
      if (ternary.schedule == ScheduleKind::budget) {
        e << YAML::Key << "steps" << YAML::Value << ternary.steps;
        e << YAML::Key << "budget" << YAML::Value << ternary.budget;
      } else {
        e << YAML::Key << "epsilon" << YAML::Value << ternary.epsilon;
        e << YAML::Key << "delta" << YAML::Value << ternary.delta;
        e << YAML::Key << "m" << YAML::Value << ternary.m;
      }
      e << YAML::Key << "common_random_numbers" << YAML::Value << ternary.common_random_numbers;
      e << YAML::EndMap;
      [[fallthrough]];
    case Mode::tune_uniform:
      if (mode == Mode::tune_uniform) {
        e << YAML::Key << "uniform" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "epsilon" << YAML::Value << uniform.epsilon;
        e << YAML::Key << "budget" << YAML::Value << uniform.budget;
        e << YAML::EndMap;
      }
      e << YAML::Key << "evaluation" << YAML::Value << YAML::BeginMap;
      e << YAML::Key << "instances" << YAML::Value << evaluation.instances;
      e << YAML::Key << "replications" << YAML::Value << evaluation.replications;
      e << YAML::EndMap;
      break;
    case Mode::validate:
      e << YAML::Key << "validate" << YAML::Value << YAML::BeginMap;
      if (validate.gamma_star) e << YAML::Key << "gamma_star" << YAML::Value << *validate.gamma_star;
      e << YAML::Key << "fine_step" << YAML::Value << validate.fine_step;
      e << YAML::Key << "fine_instances" << YAML::Value << validate.fine_instances;
      e << YAML::Key << "a_points" << YAML::Value << validate.a_points;
      e << YAML::Key << "instances" << YAML::Value << validate.instances;
      e << YAML::EndMap;
      break;
  }
  e << YAML::EndMap;
  return e.c_str();
}

namespace {

std::string csv(std::initializer_list<std::string> fields) {
  std::string line;
  for (const auto& f : fields) {
    if (!line.empty()) line += ',';
    line += f;
  }
  return line + '\n';
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

PolicySpec spec_for(const ExperimentConfig& c, PolicyKind kind) {
  PolicySpec s = c.params;
  s.kind = kind;
  s.horizon = c.horizon;
  return s;
}

RandomStream stream(const ExperimentConfig& c, LabelPath labels) {
  return derive_stream(Seed{c.seed}, labels);
}

std::vector<double> sweep_grid(const ExperimentConfig& c, PolicyKind kind) {
  std::vector<double> grid = make_grid(c.sweep.start, c.sweep.stop, c.sweep.step);
  if (is_posterior_sampling(kind))
    for (double& g : grid) g = std::max(g, BanditRegretModel::kPosteriorGammaFloor);
  return grid;
}

void write_sweep_rows(std::ostream& out, const std::string& name,
                      const std::vector<SweepPoint>& points) {
  for (const auto& p : points)
    out << csv({name, num(p.gamma), num(p.estimate.mean), num(p.estimate.std),
                num(p.estimate.stderr), num(p.estimate.count)});
}

void run_sweep(const ExperimentConfig& c, std::ostream& out, const EvaluationOptions& opt) {
  out << "policy,gamma,regret,std,stderr,instances\n";
  for (PolicyKind kind : c.policies) {
    const auto grid = sweep_grid(c, kind);
    const auto points = sweep_gamma(spec_for(c, kind), c.prior, grid, c.sweep.instances, c.horizon,
                                    stream(c, {{"sweep", 0}, {to_string(kind), 0}}), opt);
    write_sweep_rows(out, to_string(kind), points);
  }
}

void run_tuning(const ExperimentConfig& c, std::ostream& out, const EvaluationOptions& opt) {
  const bool ternary = c.mode == Mode::tune_ternary;
  Schedule schedule;
  if (ternary) {
    schedule = c.ternary.schedule == ScheduleKind::budget
                   ? budget_schedule(c.ternary.budget, c.ternary.steps)
                   : theory_schedule(c.ternary.epsilon, c.ternary.delta, c.ternary.m);
    out << "# schedule:";
    for (auto s : schedule.sizes) out << ' ' << s;
    out << '\n';
  }
  if (ternary) out << "# trace,policy,replication,step,I,J,a,b,R_hat_a,R_hat_b\n";
  out << "policy,replication,gamma_hat,regret,stderr,regret_computations\n";
  const char* label = ternary ? "ternary" : "uniform";
  for (PolicyKind kind : c.policies) {
    const PolicySpec spec = spec_for(c, kind);
    BanditRegretModel model(spec, c.prior, c.horizon, opt,
                            ternary && c.ternary.common_random_numbers);
    std::vector<double> regrets, gammas;
    for (std::size_t r = 0; r < c.evaluation.replications; ++r) {
      const RandomStream rep =
          stream(c, {{label, 0}, {to_string(kind), 0}, {"replication", static_cast<std::int64_t>(r)}});
      const std::size_t before = model.regret_computations();
      double gamma_hat = 0.0;
      if (ternary) {
        const auto trace = ternary_ebrm(model, schedule, rep.child("tune", 0));
        for (const auto& st : trace.steps)
          out << "# trace," << csv({to_string(kind), num(r), num(st.step), num(st.lower),
                                   num(st.upper), num(st.a), num(st.b), num(st.at_a.mean),
                                   num(st.at_b.mean)});
        gamma_hat = trace.gamma_hat;
      } else {
        gamma_hat = uniform_tune(model, c.uniform.epsilon, c.uniform.budget, rep.child("tune", 0)).gamma_hat;
      }
      const std::size_t used = model.regret_computations() - before;
      const auto eval = empirical_bayes_regret(spec.with_gamma(model.effective_gamma(gamma_hat)),
                                               c.prior, c.evaluation.instances, c.horizon,
                                               rep.child("evaluate", 0), opt);
      out << csv({to_string(kind), num(r), num(gamma_hat), num(eval.estimate.mean),
                  num(eval.estimate.stderr), num(used)});
      regrets.push_back(eval.estimate.mean);
      gammas.push_back(gamma_hat);
    }
    const auto summary = RegretEstimate::from_samples(regrets);
    const auto gamma_summary = RegretEstimate::from_samples(gammas);
    out << csv({to_string(kind), "mean", num(gamma_summary.mean), num(summary.mean),
                num(c.evaluation.replications > 1 ? summary.stderr : 0.0), ""});
  }
}

void run_gittins_compare(const ExperimentConfig& c, std::ostream& out,
                         const EvaluationOptions& opt) {
  auto table = std::make_shared<const GittinsTable>(
      c.gittins.cache.empty()
          ? GittinsTable::compute(c.horizon, c.gittins.tol, opt.threads)
          : GittinsTable::load_or_compute(c.gittins.cache, c.horizon, c.gittins.tol, opt.threads));
  const std::size_t horizon = c.horizon;
  PolicyFactory gittins = [table, horizon](const ProblemInstance& instance) {
    return std::unique_ptr<Policy>(new GittinsPolicy(table, instance.arms(), horizon));
  };
  const auto baseline = empirical_bayes_regret(gittins, c.prior, c.sweep.instances, c.horizon,
                                               stream(c, {{"gittins_compare", 0}, {"gittins", 0}}),
                                               opt);
  out << "policy,gamma,regret,std,stderr,instances\n";
  for (PolicyKind kind : c.policies) {
    const auto points =
        sweep_gamma(spec_for(c, kind), c.prior, sweep_grid(c, kind), c.sweep.instances, c.horizon,
                    stream(c, {{"gittins_compare", 0}, {to_string(kind), 0}}), opt);
    write_sweep_rows(out, to_string(kind), points);
  }
  std::vector<SweepPoint> flat;
  for (double g : make_grid(c.sweep.start, c.sweep.stop, c.sweep.step))
    flat.push_back({g, baseline.estimate});
  write_sweep_rows(out, "gittins", flat);
}

void run_validate(const ExperimentConfig& c, std::ostream& out, const EvaluationOptions& opt) {
  out << "policy,a,b,x,y,stderr_y\n";
  std::ostringstream trailer;
  for (PolicyKind kind : c.policies) {
    const PolicySpec spec = spec_for(c, kind);
    const RandomStream base = stream(c, {{"validate", 0}, {to_string(kind), 0}});
    double gamma_star = 0.0;
    if (c.validate.gamma_star) {
      gamma_star = *c.validate.gamma_star;
    } else {
      const auto grid = make_grid(c.validate.fine_step, 1.0, c.validate.fine_step);
      const auto points = sweep_gamma(spec, c.prior, grid, c.validate.fine_instances, c.horizon,
                                      base.child("fine", 0), opt);
      gamma_star = std::min_element(points.begin(), points.end(), [](const auto& x, const auto& y) {
                     return x.estimate.mean < y.estimate.mean;
                   })->gamma;
    }
    const double lo = c.validate.fine_step;
    if (!(gamma_star > lo))
      throw std::runtime_error(to_string(kind) + ": gamma_star " + num(gamma_star) +
                               " leaves no room for a < gamma_star");
    std::vector<double> a_grid(c.validate.a_points);
    for (std::size_t i = 0; i < a_grid.size(); ++i)
      a_grid[i] = lo + (gamma_star - lo) * static_cast<double>(i) / static_cast<double>(a_grid.size());
    BanditRegretModel model(spec, c.prior, c.horizon, opt);
    const auto scatter =
        gap_std_scatter(model, gamma_star, a_grid, c.validate.instances, base.child("scatter", 0));
    std::vector<double> xs, ys;
    for (const auto& p : scatter) {
      out << csv({to_string(kind), num(p.a), num(p.b), num(p.x), num(p.y), num(p.stderr_y)});
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    trailer << "# " << to_string(kind) << ": gamma_star=" << num(gamma_star)
            << (c.validate.gamma_star ? " (configured)" : " (fine sweep minimizer)")
            << " m=" << num(estimate_m(scatter)) << " pearson=" << num(pearson_correlation(xs, ys))
            << '\n';
  }
  out << trailer.str();
}

}  // namespace

void run_config(const ExperimentConfig& config, std::ostream& out) {
  config.check();
  const EvaluationOptions opt{config.threads};
  out << "# ebrm " << EBRM_VERSION << '\n';
  out << "# seed: " << config.seed << '\n';
  std::istringstream echo(config.canonical_yaml());
  for (std::string line; std::getline(echo, line);) out << "# config | " << line << '\n';
  switch (config.mode) {
    case Mode::sweep: run_sweep(config, out, opt); break;
    case Mode::tune_ternary:
    case Mode::tune_uniform: run_tuning(config, out, opt); break;
    case Mode::gittins_compare: run_gittins_compare(config, out, opt); break;
    case Mode::validate: run_validate(config, out, opt); break;
  }
}

}  // namespace ebrm
