"""Solve the afiro deck with every direction choice and compare iteration counts.

The fixed-eta runs move along a single member of the direction family per
iteration; the plane search picks eta and the step length together, which is
where the large savings come from.  The predictor-corrector run stays in a
small 2-norm ball instead of the wide one-sided neighborhood.

eta = 0 is plain affine scaling.  Its first step ends with some u_j exactly
on the boundary 1 - beta, and without the entropy term nothing pushes those
coordinates back inside, so the next step length collapses and the run stops
with a stalled-step failure.

    python demos/solve_afiro.py
"""
from entropy_ipm import load_lp, netlib_path
from entropy_ipm.bench import reference_for
from entropy_ipm.solver import RunConfig, run

lp = load_lp(netlib_path("afiro"))
print(f"afiro in standard form: {lp.A.shape[0]} rows, {lp.A.shape[1]} columns, {lp.nnz} nonzeros\n")

print(f"{'direction':<12} {'status':<17} {'iters':>5} {'ref':>5} {'objective':>18} {'min alpha':>10}")
for label, cfg in [
    ("eta = 0", RunConfig(eta=0.0)),
    ("eta = 1", RunConfig(eta=1.0)),
    ("eta = 2", RunConfig(eta=2.0)),
    ("eta = 4", RunConfig(eta=4.0)),
    ("two-value", RunConfig(eta_mode="two-value")),
    ("heuristic", RunConfig(eta_mode="heuristic")),
    ("exact", RunConfig(eta_mode="exact")),
    ("pred-corr", RunConfig(algorithm="pc")),
]:
    res = run(lp, cfg)
    mode = f"fixed:{cfg.eta:g}" if cfg.eta_mode == "fixed" else cfg.eta_mode
    ref = reference_for("afiro", mode) if cfg.algorithm == "wide" else None
    alpha = min(r.alpha for r in res.trace)
    obj = res.outcome.objective
    print(f"{label:<12} {res.status.value:<17} {res.iterations:>5} {ref or '':>5} "
          f"{'' if obj is None else f'{obj:.10f}':>18} {alpha:>10.4f}")

# eta chosen by the exact search changes from one iteration to the next
res = run(lp, RunConfig(eta_mode="exact"))
print("\nexact search, eta per iteration:")
print(" ".join(f"{r.eta:.2f}" for r in res.trace))
