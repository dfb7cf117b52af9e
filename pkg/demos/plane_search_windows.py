"""A plane-search instance whose feasible step lengths form two windows.

The coefficients below make ``alpha`` feasible exactly on
``(0, 0.04] U [0.991, 0.995]``.  The heuristic walks a descending alpha grid and
never lands inside the narrow far window, so it falls to its floor; the exact
search solves the two-variable problem and finds the far window's end.

    python demos/plane_search_windows.py
"""
import numpy as np

from entropy_ipm.plane_search import (CsCoefficients, exact_search, feasible_eta_at_alpha,
                                      heuristic_search)

r, lo, hi, a = 0.04, 0.991, 0.995, 20.0
e2 = -(1 - r) / r ** 2
c2 = -(a * lo ** 4 + e2 * lo ** 2 - lo + 1) / lo ** 3
coef = CsCoefficients(a=np.array([0, a, 0.0]), b=np.array([-1.0, 0, 0]),
                      c=np.array([0, c2, 0.0]), d=np.array([0, 1.0, 1.0]),
                      e=np.array([1.0, e2, -(1 - hi) / hi ** 2]))

scan = np.arange(1, 1000) / 1000
feasible = [al for al in scan if feasible_eta_at_alpha(coef, al) is not None]
pieces = np.split(feasible, np.flatnonzero(np.diff(feasible) > 1.5e-3) + 1)
print("feasible alpha on a 0.001 scan:", ", ".join(f"[{p[0]:.3f}, {p[-1]:.3f}]" for p in pieces))

h = heuristic_search(coef)
ex = exact_search(coef, limit_pairs=False)
print(f"heuristic: alpha = {h.alpha:.4g} after {h.candidates_examined} candidates")
print(f"exact:     alpha = {ex.alpha:.6f} at eta = {ex.eta:.4f}, "
      f"{ex.candidates_examined} candidate points")
print(f"min constraint slack at the exact optimum: "
      f"{np.min(coef.g(ex.alpha * ex.eta, ex.alpha) / coef.scale):.2e}")
