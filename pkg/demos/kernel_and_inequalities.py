"""Check the kernel / reparametrization correspondence and the randomised inequalities.

Each kernel pair is evaluated on a (t, mu) grid; a pair passes when one
constant K makes both sides agree to 1e-9.  Some rows fail as tabulated, and
the amended versions are listed next to them.  The second half samples points
in three neighborhoods and evaluates every inequality on them.

    python demos/kernel_and_inequalities.py
"""
from entropy_ipm import kernel, properties

for c in kernel.check_all(kernel.registry() + kernel.corrected_registry()):
    print(f"{'PASS' if c.passed else 'FAIL'}  K={c.K:<8.4g} err={c.error:.1e}  {c.name}")
neg = kernel.negative_control()
print(f"negative control {neg.name}: error {kernel.verify_correspondence(neg):.2f}\n")

reports, bracket, witness = properties.run_default_suites(samples=2000, seed=1)
for rep in reports:
    print("\n".join(rep.lines()))
print(f"{bracket.name}: {bracket.failures} failures in {bracket.checked}")
print(f"Delta12 / (N delta) at the N = 64 witness: {witness:.3f}")
