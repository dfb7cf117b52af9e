"""Search-direction targets and the scaled Newton system.

With ``v = sqrt(xs)`` and ``D = X^{1/2} S^{-1/2}`` a direction is a pair
``wp = D^{-1} dx``, ``wq = D ds`` with ``wp + wq = w`` and ``wp'wq = 0``.
Two systems are provided: the homogeneous embedding (what the solvers run)
and the plain feasible standard form, where ``wp`` is the orthogonal
projection of ``w`` onto ``null(A D)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .centrality import CentralityReport
from .hsd import HsdProblem, HsdState

LN2 = float(np.log(2.0))


# ----------------------------------------------------------------- targets

def entropy_part(rep: CentralityReport):
    """``delta v - v ln u``, the part of ``w(eta)`` multiplied by ``eta``."""
    return rep.v * (rep.delta - rep.log_u)


def w_eta(rep: CentralityReport, eta):
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    return -rep.v + eta * entropy_part(rep)


def w_affine(rep):
    return -rep.v


def w_corrector(rep: CentralityReport):
    """Centering target ``-v + mu / v``; leaves the gap unchanged."""
    return -rep.v + rep.mu / rep.v


def two_value_eta(rep: CentralityReport):
    return 1.0 / (rep.delta + LN2)


def w_two_value(rep: CentralityReport):
    """``-v_j`` where ``u_j > 3/4``; the entropy target with ``eta = 1/(delta + ln 2)`` elsewhere."""
    if np.min(rep.u) < 0.5 * (1 - 1e-12):
        raise ValueError("two-value direction needs a point with u_j >= 1/2")
    eta = two_value_eta(rep)
    w = rep.v * (-1.0 + eta * (rep.delta - rep.log_u))
    big = rep.u > 0.75
    w[big] = -rep.v[big]
    return w


def norm_identity(rep: CentralityReport, eta):
    """Closed form of ``||w(eta)||^2``."""
    N = rep.N
    return N * rep.mu * (1.0 - eta ** 2 * (rep.delta ** 2 - rep.D12 / N))


# -------------------------------------------------------------- directions

@dataclass
class DirectionPair:
    wp: np.ndarray        # scaled primal part, length N
    wq: np.ndarray        # scaled dual part, length N
    dx: np.ndarray
    ds: np.ndarray
    dy: np.ndarray
    dt: float = 0.0
    dtheta: float = 0.0
    dkappa: float = 0.0

    @property
    def w(self):
        return self.wp + self.wq

    @property
    def pq(self):
        """Componentwise product ``wp * wq`` (second-order term of ``x(a) s(a)``)."""
        return self.wp * self.wq


class NewtonSystem:
    """Linearised embedding rows plus ``S dx + X ds = V w`` at one iterate.

    The complementarity rows give ``ds`` and ``dkappa``; substituting into the
    dual rows gives ``dx`` in terms of ``(dy, dt, dtheta)``; the primal rows
    give ``dy`` through ``A D^2 A'``; two scalar equations remain for
    ``(dt, dtheta)``.  The factorisation is shared between right-hand sides.
    """

    def __init__(self, hp: HsdProblem, st: HsdState, refine=3):
        self.hp, self.st, self.refine = hp, st, refine
        A, b, c = hp.A, hp.b, hp.c
        x, s = st.x, st.s
        self.d2 = d2 = x / s
        D = self.dscale = np.sqrt(d2)
        self.factor = F = linalg.factor_orthogonal(A * D)
        self.p1, z1 = F.lift(D * c, b)
        self.p2, z2 = F.lift(D * hp.cbar, hp.bbar)
        self.q1 = D * z1
        self.q2 = -D * z2
        self.K = np.array([
            [b @ self.p1 - c @ self.q1 + st.kappa / st.t, -b @ self.p2 - c @ self.q2 + hp.zbar],
            [-hp.bbar @ self.p1 + hp.cbar @ self.q1 - hp.zbar, hp.bbar @ self.p2 + hp.cbar @ self.q2],
        ])
        xh, sh = st.xhat, st.shat
        self.v = np.sqrt(xh * sh)
        self.dinv = np.sqrt(sh / xh)      # D^{-1} on all N pairs
        Ad = A.toarray() if hasattr(A, "toarray") else np.asarray(A)
        self._ext = tuple(np.asarray(z, np.longdouble) for z in
                          (Ad, b, c, hp.bbar, hp.cbar, hp.zbar,
                           x, s, st.t, st.kappa))

    def _raw(self, f1, f2, f3, f4, rx, rt):
        hp, st, F = self.hp, self.st, self.factor
        h = self.d2 * f2 + rx / st.s
        D = self.dscale
        p0, z0 = F.lift(-h / D, f1)
        q0 = D * z0
        # y'(1) + x'(2) + t(3) + theta(4) together with the complementarity
        # rows gives rhs*dtheta = e'rx + rt on a feasible point; it stands in
        # for row (3), which is left to absorb rounding.  Row residuals fed in
        # by refinement or drift correction are kept out of dtheta so the gap
        # and theta contract together.  theta/gap equals 1/rhs on feasible
        # points and avoids carrying an absolute drift.
        dth = (rx.sum() + rt) * (st.theta / st.gap)
        dt = (f4 + hp.bbar @ p0 - hp.cbar @ q0 - self.K[1, 1] * dth) / self.K[1, 0]
        dy = p0 + self.p1 * dt - self.p2 * dth
        dx = q0 + self.q1 * dt + self.q2 * dth
        ds = (rx - st.s * dx) / st.x
        dk = (rt - st.kappa * dt) / st.t
        return dy, dx, dt, dth, ds, dk

    def _rows(self, d):
        # evaluated in extended precision: in double the rounding of the row
        # products is as large as the residual refinement is meant to remove
        A, b, c, bbar, cbar, zbar, x, s, t, kappa = self._ext
        dy, dx, dt, dth, ds, dk = (np.asarray(z, np.longdouble) for z in d)
        return (A @ dx - b * dt + bbar * dth,
                -A.T @ dy + c * dt - cbar * dth - ds,
                b @ dy - c @ dx + zbar * dth - dk,
                -bbar @ dy + cbar @ dx - zbar * dt,
                s * dx + x * ds,
                kappa * dt + t * dk)

    def _residual(self, target, d):
        res = [(np.asarray(tg, np.longdouble) - g).astype(float) if np.ndim(g)
               else float(np.longdouble(tg) - g)
               for tg, g in zip(target, self._rows(d))]
        return res, max(float(np.max(np.abs(z), initial=0.0)) for z in res[:4])

    def solve(self, w, drift=None) -> DirectionPair:
        """Direction for target ``w``.

        ``drift`` (an ``HlpResiduals``) adds ``-r`` to the embedding rows so a
        step of length ``a`` also removes the fraction ``a`` of the rounding
        drift already carried by the iterate.  ``wp'wq`` then differs from 0
        by the size of that drift.
        """
        w = np.asarray(w, float)
        r = self.v * w
        m, n = self.hp.m, self.hp.n
        if drift is None:
            rows = (np.zeros(m), np.zeros(n), 0.0, 0.0)
        else:
            rows = (-drift.r1, -drift.r2, 0.0, -drift.r4)
        target = rows + (r[:n], r[n])
        d = self._raw(*target)
        res, size = self._residual(target, d)
        best, best_size = d, size
        for _ in range(self.refine):
            # near a degenerate solution A D^2 A' is so ill conditioned that
            # refinement can diverge; keep the best iterate seen
            d = tuple(a + b for a, b in zip(d, self._raw(*res)))
            res, size = self._residual(target, d)
            if size < best_size:
                best, best_size = d, size
        d = best
        if not all(np.all(np.isfinite(z)) for z in d):
            raise linalg.NumericalRankError("non-finite search direction")
        dy, dx, dt, dth, ds, dk = d
        wp = np.append(dx, dt) * self.dinv
        wq = np.append(ds, dk) / self.dinv
        return DirectionPair(wp=wp, wq=wq, dx=dx, ds=ds, dy=dy, dt=float(dt),
                             dtheta=float(dth), dkappa=float(dk))


def solve_direction(hp: HsdProblem, st: HsdState, w) -> DirectionPair:
    return NewtonSystem(hp, st).solve(w)


# ---------------------------------------------- feasible standard form

class StandardSystem:
    """Directions for a feasible interior point of ``Ax = b, A'y + s = c``."""

    def __init__(self, A, x, s):
        A = np.asarray(A, float)
        self.A, self.x, self.s = A, np.asarray(x, float), np.asarray(s, float)
        self.D = np.sqrt(self.x / self.s)
        self.Abar = A * self.D
        self.factor = linalg.factor_normal_equations(self.Abar) if A.shape[0] else None
        self.v = np.sqrt(self.x * self.s)

    def solve(self, w) -> DirectionPair:
        wp, wq = linalg.project_null(self.Abar, self.factor, w)
        dx = self.D * wp
        ds = wq / self.D
        if self.A.shape[0]:
            dy = -self.factor.solve(self.Abar @ wq)
        else:
            dy = np.zeros(0)
        return DirectionPair(wp=wp, wq=wq, dx=dx, ds=ds, dy=dy)
