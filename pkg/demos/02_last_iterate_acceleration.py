"""Last-iterate convergence on a noiseless problem: acceleration doubles the
log-log decay exponent of SGD.

On a power-law eigenvalue spectrum the measured window exponent is the
capacity-limited one (modes with small eigenvalues are still in their
transition), so what is certified here is the exponent ratio: the
accelerated run decays at twice the SGD exponent, and its risk at the end
is orders of magnitude lower.
"""

from acls import (SgdOracle, StepSizes, benchmark_step_sizes, constants,
                  default_sgd_step_size, make_gaussian_problem, run)
from acls.experiments import fit_slope, summarize_records

d = 50
problem = make_gaussian_problem(d, 4.0, 1.0, 0.0, seed=20)
c = constants(problem)
T = 100_000
reps = 5

acc = summarize_records("acsgd", [
    run(problem, SgdOracle(), "acsgd", benchmark_step_sizes(c, d), T,
        "last", seed=s) for s in range(reps)])
sgd = summarize_records("sgd", [
    run(problem, SgdOracle(), "sgd",
        StepSizes(0.0, default_sgd_step_size(problem)), T, "last", seed=s)
    for s in range(reps)])

print(f"noiseless d={d}, eigenvalues 1/i^4, {reps} seeds, T={T}")
for lo, hi in [(500, 5_000), (500, 50_000), (10_000, 100_000)]:
    sa = fit_slope(acc.ts, acc.mean, lo, hi).slope
    ss = fit_slope(sgd.ts, sgd.mean, lo, hi).slope
    print(f"window [{lo:>6}, {hi:>6}]: accelerated slope {sa:+.2f}, "
          f"sgd slope {ss:+.2f}, ratio {sa / ss:.2f}")
print(f"\nfinal risks: accelerated {acc.mean[-1]:.2e}, "
      f"sgd {sgd.mean[-1]:.2e} "
      f"({sgd.mean[-1] / acc.mean[-1]:.0f}x apart)")
print("the exponent ratio sits at ~2 in every window; the absolute "
      "exponents steepen to -2 / -1 once all modes pass their transition "
      "times t_i ~ i^2 sqrt(3 d trH / lambda_1).")
