"""Joint choice of step length ``alpha`` and direction parameter ``eta``.

Staying in the wide neighborhood after a step along ``w(eta)`` reads, per
coordinate and with ``z = alpha * eta``,

    g_j(z, alpha) = a_j z^2 + b_j z + c_j z alpha + d_j (1 - alpha) + e_j alpha^2 >= 0

where, writing ``w(eta) = -v + eta t`` and splitting both parts,

    a_j = tp_j tq_j / mu              b_j = u_j (delta - ln u_j)
    c_j = (vp_j tq_j + vq_j tp_j) / mu
    d_j = u_j - (1 - beta)            e_j = vp_j vq_j / mu.

``g_j`` equals ``(1 - alpha) (u_j(alpha, eta) - (1 - beta))`` exactly, so the
search maximises ``alpha`` over ``{(alpha, eta): 0 <= eta <= ETA_MAX, g >= 0}``.
The bound ``ETA_MAX`` only matters where the feasible ``eta`` set is
unbounded or extremely wide; a midpoint of such a set can be so large that
``eta t`` swamps ``-v`` in rounding.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import polyroots

ALPHA_CAP = 1.0 - 1e-8
FALLBACK_ALPHA = 1e-4
PAIR_LIMIT_N = 200
PAIR_KEEP = 50
ETA_MAX = 100.0


@dataclass
class CsCoefficients:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    e: np.ndarray
    beta: float = 0.5

    @property
    def n(self):
        return self.a.size

    @property
    def scale(self):
        return 1.0 + np.abs(self.a) + np.abs(self.b) + np.abs(self.c) + np.abs(self.d) + np.abs(self.e)

    def g(self, z, alpha):
        """Constraint values; ``z`` and ``alpha`` broadcast against ``(..., n)``."""
        z = np.asarray(z, float)[..., None]
        al = np.asarray(alpha, float)[..., None]
        return (self.a * z * z + self.b * z + self.c * z * al
                + self.d * (1 - al) + self.e * al * al)

    def quad_in_eta(self, alpha):
        """Coefficients ``(A, B, C)`` of each constraint as a quadratic in ``eta``."""
        return (self.a * alpha ** 2, self.b * alpha + self.c * alpha ** 2,
                self.d * (1 - alpha) + self.e * alpha ** 2)


@dataclass
class PlaneSearchResult:
    alpha: float
    eta: float
    mode: str
    candidates_examined: int
    fallback: bool = False
    min_slack: float = 0.0


def cs_coefficients(u, delta, mu, vdir, tdir, beta=0.5) -> CsCoefficients:
    """Build the coefficients from the splits of ``-v`` and of ``t``.

    ``vdir`` and ``tdir`` are :class:`DirectionPair` objects (only ``wp`` and
    ``wq`` are used).
    """
    u = np.asarray(u, float)
    return CsCoefficients(
        a=tdir.wp * tdir.wq / mu,
        b=u * (delta - np.log(u)),
        c=(vdir.wp * tdir.wq + vdir.wq * tdir.wp) / mu,
        d=u - (1.0 - beta),
        e=vdir.wp * vdir.wq / mu,
        beta=beta,
    )


# ------------------------------------------------ fixed-alpha feasibility

def eta_intervals(coef: CsCoefficients, alpha, tol=0.0, eta_max=ETA_MAX):
    """Feasible ``0 <= eta <= eta_max`` at fixed ``alpha`` as a list of closed intervals.

    Concave (and linear) constraints cut ``[lo, hi]``; convex constraints
    with two real roots remove an open hole.  ``tol`` relaxes each
    constraint by ``tol * scale_j``.
    """
    A, B, C = coef.quad_in_eta(alpha)
    sc = np.abs(A) + np.abs(B) + np.abs(C)
    C = C + tol * coef.scale
    lo, hi = 0.0, eta_max
    holes = []
    lin = np.abs(A) <= 1e-14 * np.maximum(sc, 1e-300)
    # linear pieces
    for j in np.flatnonzero(lin):
        if abs(B[j]) <= 1e-14 * max(sc[j], 1e-300):
            if C[j] < 0:
                return []
        elif B[j] > 0:
            lo = max(lo, -C[j] / B[j])
        else:
            hi = min(hi, -C[j] / B[j])
    quad = ~lin
    if np.any(quad):
        Aq, Bq, Cq = A[quad], B[quad], C[quad]
        disc = Bq * Bq - 4 * Aq * Cq
        r1, r2, ok = polyroots._quadratic(Cq, Bq, Aq)
        rl, rh = np.minimum(r1, r2), np.maximum(r1, r2)
        conc = Aq < 0
        # concave without real roots: infeasible everywhere
        if np.any(conc & ~ok):
            return []
        if np.any(conc):
            lo = max(lo, float(np.max(rl[conc])))
            hi = min(hi, float(np.min(rh[conc])))
        cvx = (~conc) & ok & (disc > 0)
        holes = sorted(zip(rl[cvx].tolist(), rh[cvx].tolist()))
    if lo > hi:
        return []
    segs = []
    cur = lo
    for h1, h2 in holes:
        if h2 <= cur or h1 >= hi:
            continue
        if h1 >= cur:
            segs.append((cur, h1))
        cur = max(cur, h2)
        if cur > hi:
            break
    if cur <= hi:
        segs.append((cur, hi))
    return segs


def feasible_eta_at_alpha(coef: CsCoefficients, alpha, tol=0.0, eta_max=ETA_MAX):
    """Some feasible ``eta`` at ``alpha`` (midpoint of the widest piece) or ``None``."""
    segs = eta_intervals(coef, alpha, tol, eta_max)
    if not segs:
        return None
    best = max(segs, key=lambda s: s[1] - s[0])
    if np.isinf(best[1]):
        return best[0] + 1.0
    return 0.5 * (best[0] + best[1])


# ---------------------------------------------------------- exact search

def _curves(coef, idx):
    """Ascending-in-alpha coefficients of ``A, B(alpha), C(alpha)`` for rows ``idx``."""
    A = coef.a[idx][:, None]
    B = np.stack([coef.b[idx], coef.c[idx]], axis=1)
    C = np.stack([coef.d[idx], -coef.d[idx], coef.e[idx]], axis=1)
    return A, B, C


def _pair_resultants(coef, I, J):
    """Resultant in ``z`` of ``g_i`` and ``g_j``: a polynomial of degree <= 4 in alpha."""
    Ai, Bi, Ci = _curves(coef, I)
    Aj, Bj, Cj = _curves(coef, J)
    pm = polyroots.polymul
    t1 = Ai * Cj - Aj * Ci                          # degree 2
    t2 = Ai * Bj - Aj * Bi                          # degree 1
    t3 = pm(Bi, Cj) - pm(Bj, Ci)                    # degree 3
    R = pm(t1, t1) - pm(t2, t3)
    # both constraints linear in z: the general form vanishes, use B_i C_j - B_j C_i
    both_lin = (np.abs(coef.a[I]) <= 1e-14 * coef.scale[I]) & (np.abs(coef.a[J]) <= 1e-14 * coef.scale[J])
    if np.any(both_lin):
        R[both_lin] = np.pad(t3[both_lin], ((0, 0), (0, 1)))
    return R


def _z_roots(coef, rows, alpha):
    """Real roots in ``z`` of ``g_rows(., alpha)``: arrays (k, 2), NaN where absent."""
    A = coef.a[rows]
    B = coef.b[rows] + coef.c[rows] * alpha
    C = coef.d[rows] * (1 - alpha) + coef.e[rows] * alpha ** 2
    lin = np.abs(A) <= 1e-14 * coef.scale[rows]
    r1, r2, ok = polyroots._quadratic(C, B, np.where(lin, 1.0, A))
    with np.errstate(divide="ignore", invalid="ignore"):
        zl = np.where(B != 0, -C / B, np.nan)
    z1 = np.where(lin, zl, np.where(ok, r1, np.nan))
    z2 = np.where(lin, np.nan, np.where(ok, r2, np.nan))
    return np.stack([z1, z2], axis=1)


def _pair_subset(coef, prev_slack, limit_pairs):
    n = coef.n
    if not limit_pairs or n <= PAIR_LIMIT_N:
        return np.arange(n)
    slack = coef.d if prev_slack is None else prev_slack
    return np.argsort(slack)[:PAIR_KEEP]


def exact_search(coef: CsCoefficients, cap=ALPHA_CAP, limit_pairs=True, prev_slack=None,
                 point_tol=1e-10, chunk=4096, eta_max=ETA_MAX) -> PlaneSearchResult:
    """Largest ``alpha`` admitting some ``0 <= eta <= eta_max``.

    The optimum is at ``alpha = cap``, at a point where one constraint curve
    has a vertical tangent in ``z`` (its discriminant vanishes), where a
    curve meets ``z = 0`` or the line ``z = eta_max alpha``, or where two
    curves cross (common root of the pair resultant).  Every such point is generated and checked against all
    constraints; the best feasible one wins.
    """
    eta = feasible_eta_at_alpha(coef, cap, eta_max=eta_max)
    if eta is not None:
        return PlaneSearchResult(cap, eta, "exact", 1)
    sc = coef.scale
    alphas, zs = [], []
    # one-curve tangencies: discriminant of g_j in z
    a, b, c, d, e = coef.a, coef.b, coef.c, coef.d, coef.e
    disc = np.stack([b * b - 4 * a * d, 2 * b * c + 4 * a * d, c * c - 4 * a * e], axis=1)
    rows, al = polyroots.real_roots(disc, 0.0, cap)
    ok = np.abs(a[rows]) > 1e-14 * sc[rows]
    rows, al = rows[ok], al[ok]
    alphas.append(al)
    zs.append(-(b[rows] + al * c[rows]) / (2 * a[rows]))
    # curves meeting the z = 0 edge
    rows, al = polyroots.real_roots(np.stack([d, -d, e], axis=1), 0.0, cap)
    alphas.append(al)
    zs.append(np.zeros_like(al))
    if np.isfinite(eta_max):
        # curves meeting z = eta_max alpha
        h = eta_max
        edge = np.stack([d, b * h - d, a * h * h + c * h + e], axis=1)
        rows, al = polyroots.real_roots(edge, 0.0, cap)
        alphas.append(al)
        zs.append(h * al)
    # pairwise crossings
    sub = _pair_subset(coef, prev_slack, limit_pairs)
    I, J = np.triu_indices(sub.size, 1)
    I, J = sub[I], sub[J]
    if I.size:
        R = _pair_resultants(coef, I, J)
        prow, pal = polyroots.real_roots(R, 0.0, cap)
        pi, pj = I[prow], J[prow]
        zi = _z_roots(coef, pi, pal)
        zj = _z_roots(coef, pj, pal)
        zc = np.concatenate([zi, zj], axis=1)
        for k in range(zc.shape[1]):
            alphas.append(pal)
            zs.append(zc[:, k])
    alpha_c = np.concatenate(alphas)
    z_c = np.concatenate(zs)
    good = np.isfinite(z_c) & (alpha_c > 0)
    z_c = np.where(z_c < 0, np.where(z_c > -1e-12, 0.0, np.nan), z_c)
    good &= np.isfinite(z_c)
    over = z_c > eta_max * alpha_c
    z_c = np.where(over & (z_c <= eta_max * alpha_c * (1 + 1e-12)), eta_max * alpha_c, z_c)
    good &= z_c <= eta_max * alpha_c
    alpha_c, z_c = alpha_c[good], z_c[good]
    order = np.argsort(-alpha_c, kind="stable")
    alpha_c, z_c = alpha_c[order], z_c[order]
    examined = 1
    for s in range(0, alpha_c.size, chunk):
        al, zz = alpha_c[s:s + chunk], z_c[s:s + chunk]
        G = coef.g(zz, al)
        slack = np.min(G / sc, axis=1)
        examined += al.size
        hit = np.flatnonzero(slack >= -point_tol)
        if hit.size:
            k = hit[0]
            return PlaneSearchResult(float(al[k]), float(zz[k] / al[k]), "exact",
                                     examined, min_slack=float(slack[k]))
    warnings.warn("exact plane search found no feasible candidate; using the fallback step",
                  RuntimeWarning, stacklevel=2)
    return PlaneSearchResult(FALLBACK_ALPHA, 1.0, "exact", examined, fallback=True)


# ------------------------------------------------------- heuristic search

def heuristic_grid(cap=ALPHA_CAP):
    """``cap, 0.99, ..., 0.95`` then ``0.90, 0.85, ..., 0.05``, then the floor."""
    grid = [cap]
    grid += [round(1.0 - 0.01 * k, 10) for k in range(1, 6)]
    grid += [round(0.95 - 0.05 * k, 10) for k in range(1, 19)]
    grid.append(FALLBACK_ALPHA)
    return grid


def heuristic_search(coef: CsCoefficients, cap=ALPHA_CAP) -> PlaneSearchResult:
    """Scan ``alpha`` downward on a fixed grid; stop at the first feasible value."""
    for k, al in enumerate(heuristic_grid(cap), 1):
        eta = feasible_eta_at_alpha(coef, al)
        if eta is not None:
            return PlaneSearchResult(al, eta, "heuristic", k)
    warnings.warn("heuristic plane search found no feasible grid point; using the fallback step",
                  RuntimeWarning, stacklevel=2)
    return PlaneSearchResult(FALLBACK_ALPHA, 1.0, "heuristic", k, fallback=True)
