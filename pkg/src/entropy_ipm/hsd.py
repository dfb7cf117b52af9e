"""Homogeneous self-dual embedding of a standard-form LP.

For ``min c'x, Ax = b, x >= 0`` and a start ``(x0 > 0, y0, s0 > 0)`` the
embedding has variables ``(y, x, t, theta)`` with slacks ``(s, kappa)``::

    A x - b t + bbar theta                 = 0
   -A'y + c t - cbar theta          - s    = 0
    b'y - c'x + zbar theta          - kappa = 0
   -bbar'y + cbar'x - zbar t               = -(x0's0 + 1)

with ``bbar = b - A x0``, ``cbar = c - A'y0 - s0`` and
``zbar = c'x0 - b'y0 + 1``.  The point ``(y0, x0, 1, 1, s0, 1)`` is
feasible and every feasible point has ``(x0's0 + 1) theta = x's + t kappa``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from . import linalg
from .mps import LpProblem

TOL_T = 1e-7


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    PRIMAL_INFEASIBLE = "primal-infeasible"
    DUAL_INFEASIBLE = "dual-infeasible"
    INFEASIBLE = "primal-and-dual-infeasible"
    ITERATION_LIMIT = "iteration-limit"
    NUMERICAL_FAILURE = "numerical-failure"

    @property
    def exit_code(self):
        return 2 if self in (Status.ITERATION_LIMIT, Status.NUMERICAL_FAILURE) else 0


@dataclass
class HsdProblem:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    bbar: np.ndarray
    cbar: np.ndarray
    zbar: float
    rhs: float
    x0: np.ndarray
    y0: np.ndarray
    s0: np.ndarray
    lp: LpProblem | None = None
    rows: np.ndarray | None = None     # rows of the input kept after dropping redundant ones
    m_input: int | None = None

    def full_y(self, y):
        """``y`` scattered back to the rows of the input problem."""
        if self.rows is None:
            return y
        out = np.zeros(self.m_input)
        out[self.rows] = y
        return out

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    @property
    def N(self):
        """Number of complementary pairs, ``(x, s)`` plus ``(t, kappa)``."""
        return self.n + 1


@dataclass
class HsdState:
    y: np.ndarray
    x: np.ndarray
    t: float
    theta: float
    s: np.ndarray
    kappa: float

    @property
    def xs(self):
        """Complementary products over all ``N`` pairs."""
        return np.append(self.x * self.s, self.t * self.kappa)

    @property
    def gap(self):
        return float(self.x @ self.s + self.t * self.kappa)

    @property
    def mu(self):
        return self.gap / (self.x.size + 1)

    @property
    def xhat(self):
        return np.append(self.x, self.t)

    @property
    def shat(self):
        return np.append(self.s, self.kappa)

    def copy(self):
        return replace(self, y=self.y.copy(), x=self.x.copy(), s=self.s.copy())

    def step(self, d, alpha):
        """Move along a direction (object with dy, dx, dt, dtheta, ds, dkappa)."""
        return HsdState(y=self.y + alpha * d.dy, x=self.x + alpha * d.dx,
                        t=self.t + alpha * d.dt, theta=self.theta + alpha * d.dtheta,
                        s=self.s + alpha * d.ds, kappa=self.kappa + alpha * d.dkappa)


def embed(lp, x0=None, y0=None, s0=None, drop_redundant=True) -> HsdProblem:
    """Build the embedding; ``lp`` is an :class:`LpProblem` or ``(A, b, c)``.

    With ``drop_redundant`` consistent linearly dependent rows are removed
    first (they make ``A D^2 A'`` singular); ``y`` is reported on the input
    rows with zeros for the dropped ones.
    """
    if isinstance(lp, LpProblem):
        A, b, c, src = lp.A, lp.b, lp.c, lp
    else:
        A, b, c = lp
        src = None
    A = A.toarray() if sp.issparse(A) else np.asarray(A, float)
    c = np.asarray(c, float)
    A = A.reshape(-1, np.size(c)) if A.size == 0 else A
    b = np.asarray(b, float)
    m_input = A.shape[0]
    rows = None
    if drop_redundant and m_input and y0 is None:
        keep = linalg.independent_rows(A, b)
        if keep is not None and keep.size < m_input:
            rows = keep
            A, b = A[keep], b[keep]
    m, n = A.shape
    x0 = np.ones(n) if x0 is None else np.asarray(x0, float)
    s0 = np.ones(n) if s0 is None else np.asarray(s0, float)
    y0 = np.zeros(m) if y0 is None else np.asarray(y0, float)
    if np.any(x0 <= 0) or np.any(s0 <= 0):
        raise ValueError("the starting point must have x0 > 0 and s0 > 0")
    return HsdProblem(A=A, b=b, c=c, bbar=b - A @ x0, cbar=c - A.T @ y0 - s0,
                      zbar=float(c @ x0 - b @ y0 + 1.0), rhs=float(x0 @ s0 + 1.0),
                      x0=x0, y0=y0, s0=s0, lp=src, rows=rows, m_input=m_input)


def initial_state(hp: HsdProblem) -> HsdState:
    return HsdState(y=hp.y0.copy(), x=hp.x0.copy(), t=1.0, theta=1.0, s=hp.s0.copy(), kappa=1.0)


def hlp_matrix(hp: HsdProblem) -> np.ndarray:
    """The skew-symmetric matrix acting on ``(y, x, t, theta)``."""
    A, b, c = hp.A, hp.b[:, None], hp.c[:, None]
    bb, cb, m, n = hp.bbar[:, None], hp.cbar[:, None], hp.m, hp.n
    z = np.array([[hp.zbar]])
    return np.block([
        [np.zeros((m, m)), A, -b, bb],
        [-A.T, np.zeros((n, n)), c, -cb],
        [b.T, -c.T, np.zeros((1, 1)), z],
        [-bb.T, cb.T, -z, np.zeros((1, 1))],
    ])


@dataclass
class HlpResiduals:
    r1: np.ndarray
    r2: np.ndarray
    r3: float
    r4: float
    identity: float     # rhs*theta - (x's + t kappa)
    scale: float

    @property
    def max_abs(self):
        return max(np.max(np.abs(self.r1), initial=0.0), np.max(np.abs(self.r2), initial=0.0),
                   abs(self.r3), abs(self.r4))


def hlp_residuals(hp: HsdProblem, st: HsdState) -> HlpResiduals:
    A = hp.A
    r1 = A @ st.x - hp.b * st.t + hp.bbar * st.theta
    r2 = -A.T @ st.y + hp.c * st.t - hp.cbar * st.theta - st.s
    r3 = float(hp.b @ st.y - hp.c @ st.x + hp.zbar * st.theta - st.kappa)
    r4 = float(-hp.bbar @ st.y + hp.cbar @ st.x - hp.zbar * st.t + hp.rhs)
    scale = 1.0 + max(np.max(np.abs(st.x), initial=0), np.max(np.abs(st.y), initial=0),
                      np.max(np.abs(st.s), initial=0), st.t, st.kappa, st.theta)
    return HlpResiduals(r1, r2, r3, r4, hp.rhs * st.theta - st.gap, scale)


# ------------------------------------------------------------- extraction

@dataclass
class SolveOutcome:
    status: Status
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    s: np.ndarray | None = None
    objective: float | None = None
    t: float = 0.0
    kappa: float = 0.0
    certificate: dict = field(default_factory=dict)


def lp_residuals(hp: HsdProblem, st: HsdState):
    """Residuals of the original LP at ``(x, y, s) / t``."""
    xb, yb, sb = st.x / st.t, st.y / st.t, st.s / st.t
    rp = hp.b - hp.A @ xb
    rd = hp.A.T @ yb + sb - hp.c
    rg = float(hp.c @ xb - hp.b @ yb)
    return rp, rd, rg


def extract(hp: HsdProblem, st: HsdState, tol_t=TOL_T, converged=True) -> SolveOutcome:
    """Classify the final iterate.

    ``t >= tol_t * max(1, kappa)`` gives an optimal point ``(x, y, s)/t``.
    Otherwise the signs of ``c'x`` and ``-b'y`` decide which side is
    infeasible.  ``converged=False`` reports the iteration limit instead.
    """
    if st.t >= tol_t * max(1.0, st.kappa):
        x, y, s = st.x / st.t, hp.full_y(st.y / st.t), st.s / st.t
        obj = float(hp.c @ x)
        if hp.lp is not None and hp.lp.log is not None:
            obj_orig = hp.lp.log.objective(obj)
        else:
            obj_orig = obj
        status = Status.OPTIMAL if converged else Status.ITERATION_LIMIT
        return SolveOutcome(status, x=x, y=y, s=s, objective=obj_orig, t=st.t, kappa=st.kappa)
    if not converged:
        return SolveOutcome(Status.ITERATION_LIMIT, t=st.t, kappa=st.kappa)
    if st.kappa < tol_t * max(1.0, st.t):
        return SolveOutcome(Status.NUMERICAL_FAILURE, t=st.t, kappa=st.kappa)
    cx = float(hp.c @ st.x)
    by = float(hp.b @ st.y)
    scale = max(st.kappa, abs(cx), abs(by), 1e-300)
    tol = 1e-7 * scale
    dual_inf = cx < -tol
    primal_inf = -by < -tol
    cert = {"c'x": cx, "b'y": by, "x": st.x.copy(), "y": hp.full_y(st.y.copy())}
    if dual_inf and primal_inf:
        status = Status.INFEASIBLE
    elif dual_inf:
        status = Status.DUAL_INFEASIBLE
    elif primal_inf:
        status = Status.PRIMAL_INFEASIBLE
    else:
        status = Status.NUMERICAL_FAILURE
    return SolveOutcome(status, t=st.t, kappa=st.kappa, certificate=cert)
