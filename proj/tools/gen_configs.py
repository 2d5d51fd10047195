#!/usr/bin/env python3
"""Regenerate configs/: one file per regret-table cell plus one per figure.

Usage: python3 tools/gen_configs.py [--replications R]
"""
import argparse
import pathlib

PROBLEMS = {
    "warm_up": ("warm_up", ["ucb1", "bern_ts"]),
    "bernoulli": ("bernoulli_k10", ["ucb1", "bern_ts"]),
    "beta": ("beta_k10", ["ucb1", "bern_ts"]),
    "linear": ("linear_k100", ["lin_ucb", "lin_ts"]),
    "logistic": ("logistic_k100", ["ucb_glm", "glm_tsl"]),
}
TABLES = {"table1": 10000, "table2": 20000, "table3": 40000}
BUDGETS = [100, 500, 2000]


def write(path, output, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    body = "\n".join(lines + [f"output: results/{output}.csv", ""])
    path.write_text(body)


def cell_configs(root, replications):
    for table, horizon in TABLES.items():
        for problem, (preset, policies) in PROBLEMS.items():
            for policy in policies:
                stem = f"{problem}-{policy}"
                common = [f"horizon: {horizon}", f"policies: [{policy}]",
                          f"prior: {{preset: {preset}}}", "seed: 1"]
                # "Best": grid step 0.02 sweep; the reported value is its minimum.
                write(root / table / f"{stem}-best.yaml", f"{table}/{stem}-best",
                      ["mode: sweep"] + common +
                      ["sweep: {start: 0.02, stop: 1.0, step: 0.02, instances: 1000}"])
                write(root / table / f"{stem}-theory.yaml", f"{table}/{stem}-theory",
                      ["mode: sweep"] + common +
                      ["sweep: {start: 1.0, stop: 1.0, step: 1.0, instances: 1000}"])
                for s in BUDGETS:
                    write(root / table / f"{stem}-ternary-s{s}.yaml", f"{table}/{stem}-ternary-s{s}",
                          ["mode: tune_ternary"] + common +
                          [f"ternary: {{schedule: budget, steps: 6, budget: {s}}}",
                           f"evaluation: {{instances: 1000, replications: {replications}}}"])
                    write(root / table / f"{stem}-uniform-s{s}.yaml", f"{table}/{stem}-uniform-s{s}",
                          ["mode: tune_uniform"] + common +
                          [f"uniform: {{epsilon: 0.05, budget: {s}}}",
                           f"evaluation: {{instances: 1000, replications: {replications}}}"])


def figure_configs(root):
    fig = root / "figures"
    for problem in ["warm_up", "bernoulli", "beta"]:
        preset, policies = PROBLEMS[problem]
        write(fig / f"fig1-{problem}.yaml", f"figures/fig1-{problem}",
              ["mode: sweep", "horizon: 10000", f"policies: [{', '.join(policies)}]",
               f"prior: {{preset: {preset}}}", "seed: 1",
               "sweep: {start: 0.02, stop: 1.0, step: 0.02, instances: 1000}"])
        write(fig / f"fig4-{problem}.yaml", f"figures/fig4-{problem}",
              ["mode: validate", "horizon: 10000", f"policies: [{', '.join(policies)}]",
               f"prior: {{preset: {preset}}}", "seed: 1",
               "validate: {fine_step: 0.02, fine_instances: 2000, a_points: 10, instances: 2000}"])
    for problem in ["linear", "logistic"]:
        preset, policies = PROBLEMS[problem]
        write(fig / f"fig2-{problem}.yaml", f"figures/fig2-{problem}",
              ["mode: sweep", "horizon: 10000", f"policies: [{', '.join(policies)}]",
               f"prior: {{preset: {preset}}}", "seed: 1",
               "sweep: {start: 0.02, stop: 1.0, step: 0.02, instances: 1000}"])
    for variant, preset, policies in [("bernoulli", "gittins_bernoulli", "ucb1, bern_ts"),
                                      ("beta", "gittins_beta", "ucb1, bern_ts")]:
        write(fig / f"fig3-{variant}.yaml", f"figures/fig3-{variant}",
              ["mode: gittins_compare", "horizon: 200", f"policies: [{policies}]",
               f"prior: {{preset: {preset}}}", "seed: 1",
               "sweep: {start: 0.02, stop: 1.0, step: 0.02, instances: 10000}",
               "gittins: {tol: 0.0001, cache: results/gittins-200.bin}"])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--replications", type=int, default=200)
    args = parser.parse_args()
    root = pathlib.Path(__file__).resolve().parent.parent / "configs"
    cell_configs(root, args.replications)
    figure_configs(root)


if __name__ == "__main__":
    main()
