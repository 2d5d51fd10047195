// ebrm: run experiment configs and emit CSV.
//
//   ebrm <sweep|tune-ternary|tune-uniform|gittins-compare|validate|run>
//        --config FILE [--seed N] [--threads N] [--out FILE] [--gittins-cache FILE]
//   ebrm gittins-table --horizon N [--tol T] --cache FILE [--threads N]
//
// Exit status: 0 success, 1 invalid config or arguments, 2 runtime failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "ebrm/evaluator.hpp"
#include "ebrm/experiment.hpp"
#include "ebrm/gittins.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out;
  std::optional<std::string> gittins_cache;
};

int run(const std::string& subcommand, const Overrides& o) {
  ebrm::ExperimentConfig config;
  try {
    config = ebrm::load_config(o.config);
    if (subcommand != "run") {
      std::string mode = subcommand;
      for (auto& ch : mode)
        if (ch == '-') ch = '_';
      const ebrm::Mode wanted = ebrm::mode_from_string(mode);
      if (wanted != config.mode)
        throw ebrm::ConfigError(o.config + ": mode: config says '" + ebrm::to_string(config.mode) +
                                "' but subcommand is '" + subcommand + "'");
    }
    if (o.seed) config.seed = *o.seed;
    if (o.threads) config.threads = *o.threads;
    if (o.out) config.output = *o.out;
    if (o.gittins_cache) config.gittins.cache = *o.gittins_cache;
    config.check();
  } catch (const std::exception& e) {
    std::cerr << "ebrm: " << e.what() << '\n';
    return 1;
  }

  try {
    if (config.output.empty()) {
      ebrm::run_config(config, std::cout);
    } else {
      // Write to a temporary so a failed run never leaves a partial file.
      const std::string tmp = config.output + ".partial";
      {
        std::ofstream file(tmp, std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open output " + tmp);
        ebrm::run_config(config, file);
        if (!file.flush()) throw std::runtime_error("failed writing " + tmp);
      }
      if (std::rename(tmp.c_str(), config.output.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + config.output);
    }
  } catch (const ebrm::EpisodeError& e) {
    std::cerr << "ebrm: episode failed at " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ebrm: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical Bayes regret minimization: bandit sweeps, tuning and Gittins comparison"};
  app.require_subcommand(1);

  Overrides o;
  std::string chosen;
  for (const char* name :
       {"run", "sweep", "tune-ternary", "tune-uniform", "gittins-compare", "validate"}) {
    const std::string mode = name;
    auto* sub = app.add_subcommand(
        name, mode == "run" ? "Run a config in whatever mode it declares"
                            : "Run a " + mode + " config");
    sub->add_option("--config", o.config, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Override the master seed");
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "Output CSV path (default stdout)");
    sub->add_option("--gittins-cache", o.gittins_cache, "Gittins table cache file");
    sub->callback([&chosen, sub] { chosen = sub->get_name(); });
  }

  std::size_t horizon = 0, threads = 1;
  double tol = 1e-4;
  std::string cache;
  auto* table = app.add_subcommand("gittins-table", "Compute and cache a Gittins index table");
  table->add_option("--horizon", horizon, "Horizon n")->required()->check(CLI::PositiveNumber);
  table->add_option("--tol", tol, "Bisection tolerance")->check(CLI::PositiveNumber);
  table->add_option("--cache", cache, "Output cache file")->required();
  table->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  table->callback([&chosen] { chosen = "gittins-table"; });

  CLI11_PARSE(app, argc, argv);

  if (chosen == "gittins-table") {
    try {
      const auto t = ebrm::GittinsTable::load_or_compute(cache, horizon, tol, threads);
      std::cout << "gittins table: horizon " << t.horizon() << ", tol " << t.tolerance() << ", "
                << cache << '\n';
    } catch (const std::exception& e) {
      std::cerr << "ebrm: " << e.what() << '\n';
      return 2;
    }
    return 0;
  }
  return run(chosen, o);
}
