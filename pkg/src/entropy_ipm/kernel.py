"""Kernel functions ``psi`` and the matching transforms ``f``.

A kernel method uses ``S dx + X ds = -sqrt(mu) V psi'(v / sqrt(mu))`` while
applying ``f`` to both sides of ``Xs = mu e`` gives ``V w`` with
``w_j = (f(mu) - f(v_j^2)) / (v_j f'(v_j^2))``.  The two agree coordinatewise
when, for ``t = v_j``,

    -sqrt(mu) t psi'(t / sqrt(mu)) = K (f(mu) - f(t^2)) / f'(t^2)

for one constant ``K``.  ``registry()`` lists the pairs exactly as tabulated;
``corrected_registry()`` lists amended pairs for the rows that fail.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

T_REF, MU_REF = 2.0, 1.0
MUS = (0.25, 1.0, 4.0)


@dataclass
class KernelPair:
    name: str
    psi: Callable
    psi_prime: Callable
    f: Callable
    f_prime: Callable
    K: float | None = None        # fitted at (T_REF, MU_REF) when None
    convex: bool = True           # psi claimed strictly convex on t > 0
    note: str = ""

    def lhs(self, t, mu):
        r = np.sqrt(mu)
        return -r * t * self.psi_prime(t / r)

    def rhs_unit(self, t, mu):
        """Right-hand side with ``K = 1``."""
        x = t * t
        return (self.f(mu) - self.f(x)) / self.f_prime(x)

    def constant(self):
        if self.K is not None:
            return self.K
        return float(self.lhs(T_REF, MU_REF) / self.rhs_unit(T_REF, MU_REF))

    def rhs(self, t, mu):
        return self.constant() * self.rhs_unit(t, mu)


def _power(p):
    return (lambda x: x ** p), (lambda x: p * x ** (p - 1))


def _row3(q):
    # as tabulated: the second term divides by (2 - 2q)
    f, fp = _power(q)
    return KernelPair(
        f"(t^2-1)/2 + (t^(2-2q)-1)/(2-2q), q={q:g} | x^q",
        psi=lambda t: 0.5 * (t * t - 1) + (t ** (2 - 2 * q) - 1) / (2 - 2 * q),
        psi_prime=lambda t: t + t ** (1 - 2 * q),
        f=f, f_prime=fp)


def _row5(q):
    f, fp = _power((1 - q) / 2)
    return KernelPair(
        f"(t^2-1)/2 + (t^(1-q)-1)/(q-1), q={q:g} | x^((1-q)/2)",
        psi=lambda t: 0.5 * (t * t - 1) + (t ** (1 - q) - 1) / (q - 1),
        psi_prime=lambda t: t - t ** (-q),
        f=f, f_prime=fp)


def registry(qs=(2.0, 3.0)):
    """The tabulated pairs; the two parametrized rows once per ``q``."""
    rows = [
        KernelPair("(t^2-1)/2 - ln t | x",
                   psi=lambda t: 0.5 * (t * t - 1) - np.log(t),
                   psi_prime=lambda t: t - 1 / t,
                   f=lambda x: x, f_prime=lambda x: np.ones_like(np.asarray(x, float))),
        KernelPair("(t - 1/t)^2 / 2 | x^2",
                   psi=lambda t: 0.5 * (t - 1 / t) ** 2,
                   psi_prime=lambda t: t - t ** -3.0,
                   f=lambda x: x * x, f_prime=lambda x: 2 * x),
    ]
    rows += [_row3(q) for q in qs]
    rows.append(KernelPair("(t^2 + 1/t^2)/2 - 1 | 1/x",
                           psi=lambda t: 0.5 * (t * t + t ** -2.0) - 1,
                           psi_prime=lambda t: t - t ** -3.0,
                           f=lambda x: 1 / x, f_prime=lambda x: -1 / (x * x)))
    rows += [_row5(q) for q in qs]
    rows.append(KernelPair("(t-1)^2 | sqrt x",
                           psi=lambda t: (t - 1) ** 2,
                           psi_prime=lambda t: 2 * (t - 1),
                           f=np.sqrt, f_prime=lambda x: 0.5 / np.sqrt(x)))
    rows.append(KernelPair("t^2 ln t - t^2/2 + 1/2 | ln x",
                           psi=lambda t: t * t * np.log(t) - 0.5 * t * t + 0.5,
                           psi_prime=lambda t: 2 * t * np.log(t),
                           f=np.log, f_prime=lambda x: 1 / x,
                           convex=False))
    return rows


def corrected_registry(qs=(2.0, 3.0)):
    """Amended versions of the rows that fail as tabulated."""
    out = []
    for q in qs:
        f, fp = _power(q)
        out.append(KernelPair(
            f"(t^2-1)/2 + (t^(2-2q)-1)/(2q-2), q={q:g} | x^q",
            psi=lambda t, q=q: 0.5 * (t * t - 1) + (t ** (2 - 2 * q) - 1) / (2 * q - 2),
            psi_prime=lambda t, q=q: t - t ** (1 - 2 * q),
            f=f, f_prime=fp, note="sign of the second denominator flipped; K = q"))
    out.append(KernelPair(
        "(t^2-1)^2 / 4 | 1/x",
        psi=lambda t: 0.25 * (t * t - 1) ** 2,
        psi_prime=lambda t: t * (t * t - 1),
        f=lambda x: 1 / x, f_prime=lambda x: -1 / (x * x),
        note="kernel solved from f = 1/x; the tabulated psi equals the x^2 row's"))
    for q in qs:
        f, fp = _power((q + 1) / 2)
        out.append(KernelPair(
            f"(t^2-1)/2 + (t^(1-q)-1)/(q-1), q={q:g} | x^((q+1)/2)",
            psi=lambda t, q=q: 0.5 * (t * t - 1) + (t ** (1 - q) - 1) / (q - 1),
            psi_prime=lambda t, q=q: t - t ** (-q),
            f=f, f_prime=fp, note="exponent of f is (q+1)/2; K = (q+1)/2"))
    return out


def default_grid(mus=MUS, lo=0.2, hi=5.0, num=200, gap=1e-6):
    """``(t, mu)`` samples with ``t`` kept away from ``sqrt(mu)`` by at least ``gap``."""
    pts = []
    ts = np.linspace(lo, hi, num)
    for mu in mus:
        keep = np.abs(ts - np.sqrt(mu)) > gap
        pts += [(t, mu) for t in ts[keep]]
    return np.array(pts)


def verify_correspondence(pair: KernelPair, samples=None):
    """``max |LHS - RHS| / max(|LHS|, 1e-30)`` over the samples."""
    pts = default_grid() if samples is None else np.asarray(samples, float)
    t, mu = pts[:, 0], pts[:, 1]
    with np.errstate(all="ignore"):
        lhs = pair.lhs(t, mu)
        rhs = pair.rhs(t, mu)
        err = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-30)
    err = np.where(np.isfinite(err), err, np.inf)
    return float(np.max(err))


def shape_ok(pair: KernelPair, lo=0.2, hi=5.0, num=401):
    """``psi(1) = 0`` and ``psi`` decreasing on ``(lo, 1)`` and increasing on ``(1, hi)``."""
    if abs(pair.psi(1.0)) > 1e-14:
        return False
    left = np.linspace(lo, 1.0, num)
    right = np.linspace(1.0, hi, num)
    return bool(np.all(np.diff(pair.psi(left)) < 0) and np.all(np.diff(pair.psi(right)) > 0))


@dataclass
class KernelCheck:
    name: str
    K: float
    error: float
    shape: bool
    passed: bool
    note: str = ""


def check_all(pairs=None, tol=1e-9):
    pairs = registry() if pairs is None else pairs
    out = []
    for p in pairs:
        err = verify_correspondence(p)
        out.append(KernelCheck(p.name, p.constant(), err, shape_ok(p), err <= tol, p.note))
    return out


def negative_control():
    """psi of the first row against f of the second; must not correspond."""
    r = registry()
    return KernelPair("control: row1 psi | x^2", psi=r[0].psi, psi_prime=r[0].psi_prime,
                      f=r[1].f, f_prime=r[1].f_prime)
