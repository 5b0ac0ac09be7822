"""Survey script: cocycle counts and Betti numbers shrink as n grows.

Runs the same two experiment drivers the CLI exposes and prints compact
tables. Everything is seeded; rerunning reproduces the byte-identical rows.
"""
from cochainlab.lab import ExperimentConfig, run_betti_trend, run_ez1_trend
from cochainlab.lab.experiments import weakly_decreasing_violations

cfg = ExperimentConfig(
    seed=7,
    model="one-out",
    n_values=(6, 8, 10, 12, 14),
    samples=150,
    include_mg=True,
)

ez = run_ez1_trend(cfg)
print("normalized log mean cocycle count, one-out model")
for row in zip(ez.column("n"), ez.column("normalized_log_mean"), ez.column("se_normalized")):
    print("  n=%2d  %.5f  (se %.5f)" % row)
v = weakly_decreasing_violations(ez.column("normalized_log_mean"), ez.column("se_normalized"))
print(f"2-SE monotonicity violations: {v}")

bt = run_betti_trend(cfg)
print("\ndim H^1 over F_2 quantiles / n^2, one-out model")
for i in range(len(bt.column("n"))):
    print("  n=%2d  med %.5f  max %.5f  mg med %.5f" % (
        bt.column("n")[i],
        bt.column("median_norm")[i],
        bt.column("max_norm")[i],
        bt.column("mg_median_norm")[i],
    ))

# hypertrees have no free part, so the same statistic probes pure torsion
cfg2 = ExperimentConfig(seed=7, model="hypertree", n_values=(6, 8, 10), samples=150)
bt2 = run_betti_trend(cfg2)
print("\nhypertree model (H^1 finite, dim over F_2 counts 2-torsion)")
for i in range(len(bt2.column("n"))):
    print("  n=%2d  mean %.5f  max %.5f" % (
        bt2.column("n")[i], bt2.column("mean_norm")[i], bt2.column("max_norm")[i]))
