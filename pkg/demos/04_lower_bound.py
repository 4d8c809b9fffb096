"""The information-theoretic floor: no stochastic first-order method can
beat Omega(1/d) excess risk in d/2 iterations on the one-hot worst case.

Features are standard basis vectors, so every stochastic gradient points
along one coordinate and the iterates never leave the span of the observed
features (checked to machine precision).  After d/2 samples at least d/2
coordinates of the optimum are unseen and each keeps a 1/(2d^2)
contribution, so the excess risk is at least 1/(4d) regardless of the
algorithm."""

from acls.experiments import lower_bound_experiment

d = 50
report = lower_bound_experiment(d, reps=20, seed=0)

print(f"one-hot uniform d={d}, noiseless, {report.repetitions} seeds, "
      f"measured at t={d // 2}")
print(f"information floor 1/(4d) = {report.risk_floor:.4f}")
for name, mean in sorted(report.mean_risk_at_half_d.items()):
    print(f"  {name:>6}: mean excess risk {mean:.4f} "
          f"({mean / report.risk_floor:.2f}x the floor)")
print(f"max span residual over all steps: "
      f"{report.max_span_residual:.1e} (iterates stay in the span of the "
      "observed features)")
print(f"per-seed check risk >= (d - seen)/(2 d^2): worst slack "
      f"{report.min_floor_slack:+.1e}")
