"""Weighted-average accelerated SGD against Polyak-averaged SGD on a noisy
streaming least-squares problem.

The accelerated method forgets its initialization at an O(d/t^2) rate while
keeping the O(sigma^2 d / t) noise floor of averaged SGD, so it pulls ahead
in the bias-dominated phase and stays matched afterwards.
"""

import numpy as np

from acls import (SgdOracle, StepSizes, benchmark_step_sizes, constants,
                  default_sgd_step_size, make_gaussian_problem, run)

d = 20
problem = make_gaussian_problem(d, decay_exponent=4.0, scale=1.0,
                                sigma=0.02, seed=20)
c = constants(problem)
acc_steps = benchmark_step_sizes(c, d)
gamma = default_sgd_step_size(problem)
T = 100_000
seeds = range(5)

curves = {}
for name, algorithm, steps, averaging in [
        ("accelerated / weighted avg", "acsgd", acc_steps, "weighted"),
        ("sgd / polyak avg", "sgd", StepSizes(0.0, gamma), "polyak")]:
    records = [run(problem, SgdOracle(), algorithm, steps, T, averaging,
                   seed=s) for s in seeds]
    ts = records[0].iterations
    curves[name] = (ts, np.stack([r.risk_avg for r in records]).mean(axis=0))

print(f"noisy problem: d={d}, eigenvalues 1/i^4, sigma=0.02, "
      f"{len(list(seeds))} seeds")
print(f"steps: alpha={acc_steps.alpha:.4g}, beta={acc_steps.beta:.4g}, "
      f"gamma={gamma:.4g}\n")
print(f"{'t':>8} | {'accelerated':>12} | {'sgd':>12}")
ts = curves["accelerated / weighted avg"][0]
marks = np.searchsorted(ts, [10, 100, 1000, 10_000, 100_000])
for i in marks:
    acc = curves["accelerated / weighted avg"][1][i]
    sgd = curves["sgd / polyak avg"][1][i]
    print(f"{ts[i]:>8d} | {acc:12.3e} | {sgd:12.3e}")

print("\nthe accelerated run drops below sgd once the bias phase ends and "
      "both settle on the sigma^2 d / t floor.")
