"""Entropy-based centrality quantities and neighborhood tests.

All functions work on the vector of complementary products ``xs`` (length
``N``).  For a homogeneous embedding the last pair is ``(t, kappa)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG_CLAMP = 700.0


def _check(xs):
    xs = np.asarray(xs, float)
    bad = np.flatnonzero(~np.isfinite(xs) | (xs <= 0))
    if bad.size:
        j = int(bad[0])
        raise ValueError(f"complementary product {j} is not finite and positive ({xs[j]!r})")
    return xs


def ratios(xs):
    """``u = xs / mu`` with ``mu = sum(xs) / N``."""
    xs = _check(xs)
    mu = xs.sum() / xs.size
    return xs / mu, mu


def log_ratio(u):
    """``ln u`` through ``log1p`` near 1, clamped to ``[-700, 700]``."""
    u = np.asarray(u, float)
    d = u - 1.0
    near = np.abs(d) < 0.5
    with np.errstate(divide="ignore"):
        lu = np.where(near, np.log1p(np.where(near, d, 0.0)), np.log(u))
    return np.clip(lu, -LOG_CLAMP, LOG_CLAMP)


def delta_of_u(u, log_u=None):
    """``(1/N) sum u_j ln u_j``.

    Summed as ``u ln u - (u - 1)``, which differs only by ``sum(u) - N = 0``
    and has nonnegative terms, so ``delta >= 0`` holds in floating point and
    no cancellation occurs near the central path.
    """
    u = np.asarray(u, float)
    lu = log_ratio(u) if log_u is None else log_u
    terms = u * lu - (u - 1.0)
    return max(math.fsum(terms) / u.size, 0.0)


@dataclass(frozen=True)
class CentralityReport:
    mu: float
    delta: float
    u: np.ndarray
    v: np.ndarray
    log_u: np.ndarray
    D21: float
    D12: float
    D22: float

    @property
    def N(self):
        return self.u.size

    @property
    def gap(self):
        return self.mu * self.N


def report(xs) -> CentralityReport:
    xs = _check(xs)
    u, mu = ratios(xs)
    lu = log_ratio(u)
    ulu = u * lu
    return CentralityReport(mu=float(mu), delta=delta_of_u(u, lu),
                            u=u, v=np.sqrt(xs), log_u=lu,
                            D21=float(np.dot(u, ulu)), D12=float(np.dot(ulu, lu)),
                            D22=float(np.dot(ulu, ulu)))


def centrality_report(x, s) -> CentralityReport:
    return report(np.asarray(x, float) * np.asarray(s, float))


# ------------------------------------------------------------ neighborhoods

def in_n2(xs, beta):
    u, _ = ratios(xs)
    return bool(np.linalg.norm(u - 1.0) <= beta)


def in_ninf(xs, beta):
    u, _ = ratios(xs)
    return bool(np.max(np.abs(u - 1.0)) <= beta)


def in_ninf_minus(xs, beta):
    u, _ = ratios(xs)
    return bool(np.min(u) >= 1.0 - beta)


def in_ne(xs, beta):
    """Entropy neighborhood: ``1/2 - beta <= ln u_j <= 1/2 + beta``."""
    u, _ = ratios(xs)
    lu = np.log(u)
    return bool(np.all(lu >= 0.5 - beta) and np.all(lu <= 0.5 + beta))


def ninf_minus_slack(xs, beta):
    """``min_j u_j - (1 - beta)``; nonnegative inside the wide neighborhood."""
    u, _ = ratios(xs)
    return float(np.min(u) - (1.0 - beta))


def n2_distance(xs):
    u, _ = ratios(xs)
    return float(np.linalg.norm(u - 1.0))
