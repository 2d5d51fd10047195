#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebrm/environments.hpp"
#include "ebrm/policies.hpp"

namespace ebrm {

// Invalid or unparsable experiment config. what() reads
// "<file>:<line>: <field>: <problem>".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { sweep, tune_ternary, tune_uniform, gittins_compare, validate };
const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

enum class ScheduleKind { budget, theory };

struct SweepSettings {
  double start = 0.02, stop = 1.0, step = 0.02;
  std::size_t instances = 1000;
};

struct TernarySettings {
  ScheduleKind schedule = ScheduleKind::budget;
  std::size_t steps = 6;      // budget schedule
  std::size_t budget = 2000;  // budget schedule
  double epsilon = 0.05, delta = 0.05, m = 1.0;  // theory schedule
  bool common_random_numbers = false;
};

struct UniformSettings {
  double epsilon = 0.05;
  std::size_t budget = 100;
};

// Post-hoc evaluation of each tuned gamma, repeated over replications.
struct EvaluationSettings {
  std::size_t instances = 1000;
  std::size_t replications = 1;
};

struct GittinsSettings {
  double tol = 1e-4;
  std::string cache;  // empty: compute in memory
};

struct ValidateSettings {
  std::optional<double> gamma_star;  // unset: minimizer of a fine sweep
  double fine_step = 0.02;
  std::size_t fine_instances = 2000;
  std::size_t a_points = 10;
  std::size_t instances = 2000;
};

struct ExperimentConfig {
  std::string source = "<config>";
  Mode mode = Mode::sweep;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string output;  // empty: stdout
  std::size_t horizon = 10000;
  InstancePrior prior;
  std::vector<PolicyKind> policies{PolicyKind::ucb1};
  PolicySpec params;  // kind and gamma are ignored
  SweepSettings sweep;
  TernarySettings ternary;
  UniformSettings uniform;
  EvaluationSettings evaluation;
  GittinsSettings gittins;
  ValidateSettings validate;

  // Cross-field checks; throws ConfigError.
  void check() const;
  // Canonical YAML of every setting that affects results (threads and
  // output excluded, so output files do not depend on them).
  std::string canonical_yaml() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

// Writes "#"-prefixed metadata followed by CSV rows. Numbers use %.6g.
void run_config(const ExperimentConfig& config, std::ostream& out);

std::string format_number(double value);

}  // namespace ebrm
