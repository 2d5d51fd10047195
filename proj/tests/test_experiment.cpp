#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "ebrm/experiment.hpp"

using namespace ebrm;

namespace {

std::string run(const ExperimentConfig& c) {
  std::ostringstream out;
  run_config(c, out);
  return out.str();
}

std::size_t data_rows(const std::string& text) {
  std::istringstream in(text);
  std::size_t rows = 0;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults and presets") {
  const auto c = parse_config("mode: sweep\nprior: {preset: bernoulli_k10}\npolicies: [ucb1, bern_ts]\n");
  CHECK(c.mode == Mode::sweep);
  CHECK(c.horizon == 10000);
  CHECK(c.prior.family == PriorFamily::beta_means);
  CHECK(c.prior.arms == 10);
  CHECK(c.policies.size() == 2);
  CHECK(c.sweep.step == 0.02);
  const auto d = parse_config("mode: tune_ternary\nprior: {preset: warm_up, first: [0.6, 0.4], second: [0.4, 0.6]}\n");
  CHECK(d.prior.first[0] == 0.6);
  CHECK(d.ternary.steps == 6);
  CHECK(d.ternary.budget == 2000);
}

TEST_CASE("config diagnostics carry line and field") {
  CHECK(error_of("mode: sweep\nprior:\n  preset: warm_up\n  armz: 3\n") == "cfg.yaml:4: prior.armz: unknown key");
  CHECK(error_of("mode: sweep\nhorizon: abc\n") == "cfg.yaml:2: horizon: cannot parse value 'abc'");
  CHECK(error_of("mode: sweeep\n").find("cfg.yaml:1: mode: unknown mode") == 0);
  CHECK(error_of("mode: sweep\npolicies: [ucb2]\n").find("cfg.yaml:2: policies:") == 0);
  CHECK(error_of("mode: sweep\nbogus: 1\n") == "cfg.yaml:2: bogus: unknown key");
  CHECK(error_of("mode: sweep\npolicies: [lin_ucb]\n").find("policies: lin_ucb does not apply") != std::string::npos);
  CHECK(error_of("mode: tune_ternary\nternary: {steps: 6, budget: 11}\n").find("ternary.budget") != std::string::npos);
  CHECK(error_of("mode: tune_uniform\nuniform: {epsilon: 0.05, budget: 10}\n").find("budget too small for grid") !=
        std::string::npos);
  CHECK(error_of("mode: sweep\nprior: {preset: beta_k10, v: -1}\n").find("cfg.yaml:2: prior") == 0);
  CHECK(error_of("mode: [\n").find("cfg.yaml:") == 0);
  CHECK(error_of("") == "cfg.yaml:1: empty config");
}

TEST_CASE("number format") {
  CHECK(format_number(87.81234567) == "87.8123");
  CHECK(format_number(0.02) == "0.02");
  CHECK(format_number(1e-7) == "1e-07");
}

TEST_CASE("sweep output shape and determinism across thread counts") {
  auto c = parse_config(
      "mode: sweep\nseed: 3\nhorizon: 200\npolicies: [ucb1, bern_ts]\nprior: {preset: warm_up}\n"
      "sweep: {start: 0.02, stop: 1.0, step: 0.02, instances: 4}\n");
  const auto one = run(c);
  CHECK(data_rows(one) == 100);
  CHECK(one.find("# seed: 3") != std::string::npos);
  CHECK(one.find("policy,gamma,regret,std,stderr,instances") != std::string::npos);
  c.threads = 3;
  CHECK(run(c) == one);
  c.seed = 4;
  CHECK(run(c) != one);
}

TEST_CASE("tuning modes") {
  auto t = parse_config(
      "mode: tune_ternary\nhorizon: 300\npolicies: [ucb1]\nprior: {preset: warm_up}\n"
      "ternary: {steps: 6, budget: 24}\nevaluation: {instances: 10, replications: 3}\n");
  const auto text = run(t);
  CHECK(data_rows(text) == 4);  // three replications and the mean row
  CHECK(text.find("# schedule: 2 2 2 2 2 2") != std::string::npos);
  CHECK(text.find("# trace,ucb1,2,6,") != std::string::npos);
  CHECK(text.find("ucb1,mean,") != std::string::npos);
  t.threads = 2;
  CHECK(run(t) == text);

  const auto theory = parse_config(
      "mode: tune_ternary\nhorizon: 50\nprior: {preset: warm_up}\n"
      "ternary: {schedule: theory, epsilon: 0.4, delta: 0.5, m: 20}\n");
  CHECK(run(theory).find("# schedule: 1\n") != std::string::npos);

  const auto u = parse_config(
      "mode: tune_uniform\nhorizon: 300\npolicies: [bern_ts]\nprior: {preset: warm_up}\n"
      "uniform: {epsilon: 0.25, budget: 8}\nevaluation: {instances: 5}\n");
  const auto ut = run(u);
  CHECK(data_rows(ut) == 2);
  CHECK(ut.find("bern_ts,0,") != std::string::npos);
  CHECK(ut.find(",10\n") != std::string::npos);  // 5 grid points x 2 samples
}

TEST_CASE("gittins comparison and validation modes") {
  const auto path = std::filesystem::temp_directory_path() / "ebrm_test_cfg_gittins.bin";
  std::filesystem::remove(path);
  auto g = parse_config("mode: gittins_compare\nhorizon: 30\npolicies: [ucb1, bern_ts]\n"
                        "prior: {preset: gittins_beta}\nsweep: {start: 0.25, stop: 1, step: 0.25, instances: 20}\n"
                        "gittins: {tol: 0.001, cache: " + path.string() + "}\n");
  const auto text = run(g);
  CHECK(data_rows(text) == 12);
  CHECK(std::filesystem::exists(path));
  CHECK(run(g) == text);  // second run reads the cache
  std::filesystem::remove(path);
  std::istringstream in(text);
  std::string flat;
  for (std::string line; std::getline(in, line);)
    if (line.rfind("gittins,", 0) == 0) {
      const auto value = line.substr(line.find(',', 8));
      if (flat.empty()) flat = value;
      CHECK(value == flat);
    }

  const auto v = parse_config("mode: validate\nhorizon: 300\npolicies: [ucb1]\nprior: {preset: warm_up}\n"
                              "validate: {gamma_star: 0.5, a_points: 4, instances: 20}\n");
  const auto vt = run(v);
  CHECK(data_rows(vt) == 4);
  CHECK(vt.find("# ucb1: gamma_star=0.5 (configured) m=") != std::string::npos);
  CHECK(vt.find("pearson=") != std::string::npos);
}

TEST_CASE("shipped configs parse") {
  const std::filesystem::path dir = std::filesystem::path(EBRM_SOURCE_DIR) / "configs";
  REQUIRE(std::filesystem::is_directory(dir));
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.path().extension() != ".yaml") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
    ++count;
  }
  CHECK(count > 0);
}
