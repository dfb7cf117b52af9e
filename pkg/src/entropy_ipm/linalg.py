"""Normal-equation factorizations and null-space projections."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

SHIFT_START = 1e-12
SHIFT_MAX = 1e-4


class NumericalRankError(np.linalg.LinAlgError):
    """Raised when no admissible diagonal shift gives a usable factor."""


@dataclass
class CholeskyFactor:
    """Lower Cholesky factor of ``M + shift*I``; ``M`` kept for refinement."""
    L: np.ndarray
    M: np.ndarray
    shift: float

    @property
    def size(self):
        return self.M.shape[0]

    def solve(self, r, refine=1):
        r = np.asarray(r, float)
        if self.size == 0:
            return np.zeros_like(r)
        x = sla.cho_solve((self.L, True), r, check_finite=False)
        for _ in range(refine):
            res = r - self.M @ x
            x = x + sla.cho_solve((self.L, True), res, check_finite=False)
        return x


def _dense(A):
    return A.toarray() if sp.issparse(A) else np.asarray(A, float)


def factor_matrix(M) -> CholeskyFactor:
    """Cholesky of a symmetric PSD matrix with diagonal regularisation.

    The first attempt is unshifted.  On failure the shift starts at
    ``1e-12 * ||M||_inf`` and grows tenfold up to ``1e-4 * ||M||_inf``.
    """
    M = np.asarray(M, float)
    m = M.shape[0]
    if m == 0:
        return CholeskyFactor(np.zeros((0, 0)), M, 0.0)
    scale = np.abs(M).sum(axis=1).max()
    if not np.isfinite(scale):
        raise NumericalRankError("non-finite normal matrix")
    scale = scale if scale > 0 else 1.0
    shift = 0.0
    while True:
        try:
            L = np.linalg.cholesky(M + shift * np.eye(m))
            return CholeskyFactor(L, M, shift)
        except np.linalg.LinAlgError:
            pass
        shift = SHIFT_START * scale if shift == 0.0 else shift * 10.0
        if shift > SHIFT_MAX * scale * (1 + 1e-12):
            raise NumericalRankError(f"no Cholesky factor with shift <= {SHIFT_MAX:g}*||M||")


@dataclass
class OrthoFactor:
    """``R`` from a Householder QR of ``[Abar'; sqrt(shift) I]``, so ``R'R = Abar Abar' + shift I``.

    ``Q`` holds the first ``n`` rows of the orthogonal factor.  Solutions are
    formed through ``Q`` rather than through ``Abar Abar'``, which keeps
    ``Abar z`` accurate to working precision of ``Abar`` itself even when the
    Gram matrix has condition far beyond ``1/eps``.
    """
    Q: np.ndarray
    R: np.ndarray
    shift: float

    @property
    def size(self):
        return self.R.shape[0]

    def _rt(self, f):
        return sla.solve_triangular(self.R, f, trans="T", check_finite=False)

    def _r(self, f):
        return sla.solve_triangular(self.R, f, check_finite=False)

    def solve(self, r):
        r = np.asarray(r, float)
        if self.size == 0:
            return np.zeros_like(r)
        return self._r(self._rt(r))

    def lift(self, g, f):
        """``p = (Abar Abar')^{-1} (Abar g + f)`` and ``z = Abar' p - g``."""
        g = np.asarray(g, float)
        if self.size == 0:
            return np.zeros(0), -g
        k = self.Q.T @ g + self._rt(f)
        return self._r(k), self.Q @ k - g


def factor_orthogonal(Abar) -> OrthoFactor:
    """Orthogonal factor with the same shift rule as ``factor_normal_equations``."""
    Ad = _dense(Abar)
    m, n = Ad.shape
    if m == 0:
        return OrthoFactor(np.zeros((n, 0)), np.zeros((0, 0)), 0.0)
    M = Ad @ Ad.T
    shift = factor_matrix(M).shift
    if n < m and shift == 0.0:
        # Abar' has fewer rows than columns; a minimal shift keeps R square
        shift = SHIFT_START * max(np.abs(M).sum(axis=1).max(), 1.0)
    At = Ad.T
    # rows sorted by decreasing norm keep Householder QR accurate on graded
    # matrices such as A D with D spanning many orders of magnitude
    order = np.argsort(-np.abs(At).max(axis=1), kind="stable")
    B = At[order]
    if shift > 0:
        B = np.vstack([B, np.sqrt(shift) * np.eye(m)])
    Qf, R = np.linalg.qr(B)
    Q = np.empty((n, m))
    Q[order] = Qf[:n]
    return OrthoFactor(Q, R, shift)


def independent_rows(A, b, tol=1e-10):
    """Indices of a maximal independent row set of ``A`` if ``Ax = b`` is rank consistent.

    Uses QR with column pivoting of ``A'``.  Returns ``None`` when some
    dependent row has a right-hand side that disagrees with its combination
    of independent rows; those systems are left alone so the solver can
    certify infeasibility.
    """
    Ad = _dense(A)
    b = np.asarray(b, float)
    m = Ad.shape[0]
    if m == 0:
        return np.arange(0)
    _, R, piv = sla.qr(Ad.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        rank = 0
    else:
        rank = int(np.sum(diag > tol * max(Ad.shape) * diag[0]))
    keep = np.sort(piv[:rank])
    if rank == m:
        return keep
    drop = np.setdiff1d(np.arange(m), keep)
    lam, *_ = np.linalg.lstsq(Ad[keep].T, Ad[drop].T, rcond=None)
    pred = lam.T @ b[keep]
    if np.any(np.abs(pred - b[drop]) > 1e-9 * (1.0 + np.abs(b).max())):
        return None
    return keep


def factor_normal_equations(Abar) -> CholeskyFactor:
    """Factor ``Abar @ Abar.T``."""
    Ad = _dense(Abar)
    return factor_matrix(Ad @ Ad.T)


def project_null(Abar, factor: CholeskyFactor | None, w):
    """Split ``w = wp + wq`` with ``Abar wp = 0`` and ``wq = Abar' lam``."""
    Ad = _dense(Abar)
    w = np.asarray(w, float)
    if Ad.shape[0] == 0:
        return w.copy(), np.zeros_like(w)
    if factor is None:
        factor = factor_normal_equations(Ad)
    lam = factor.solve(Ad @ w)
    wq = Ad.T @ lam
    wp = w - wq
    # one more pass pulls wp back onto the null space
    lam2 = factor.solve(Ad @ wp)
    corr = Ad.T @ lam2
    return wp - corr, wq + corr
