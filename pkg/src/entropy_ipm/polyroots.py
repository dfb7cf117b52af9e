"""Real roots of many low-degree polynomials at once.

Coefficients are stored in ascending order: ``p(x) = sum_k coef[k] x**k``.
Degrees 1 and 2 use closed forms; higher degrees use companion-matrix
eigenvalues, followed by a short Newton polish on every real root.
"""
import numpy as np


def polyval(coef, x):
    """Evaluate row-wise: ``coef`` is ``(K, d+1)``, ``x`` is ``(K,)``."""
    out = np.zeros_like(x, dtype=float)
    for k in range(coef.shape[1] - 1, -1, -1):
        out = out * x + coef[:, k]
    return out


def _polyder(coef):
    d = coef.shape[1] - 1
    if d == 0:
        return np.zeros((coef.shape[0], 1))
    return coef[:, 1:] * np.arange(1, d + 1)


def polymul(p, q):
    """Row-wise product of ascending coefficient arrays."""
    K = p.shape[0]
    out = np.zeros((K, p.shape[1] + q.shape[1] - 1))
    for i in range(p.shape[1]):
        out[:, i:i + q.shape[1]] += p[:, i:i + 1] * q
    return out


def _quadratic(c0, c1, c2):
    disc = c1 * c1 - 4 * c2 * c0
    ok = disc >= 0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    qq = -0.5 * (c1 + np.where(c1 >= 0, sq, -sq))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(qq != 0, qq / c2, -c1 / (2 * c2))
        r2 = np.where(qq != 0, c0 / qq, r1)
    return r1, r2, ok


def real_roots(coef, lo=-np.inf, hi=np.inf, rel_zero=1e-13, polish=2):
    """Return ``(row, root)`` arrays of real roots inside ``[lo, hi]``."""
    coef = np.atleast_2d(np.asarray(coef, float))
    K, width = coef.shape
    scale = np.max(np.abs(coef), axis=1)
    live = scale > 0
    c = np.where(live[:, None], coef / np.where(live, scale, 1.0)[:, None], 0.0)
    small = np.abs(c) <= rel_zero
    # effective degree: highest coefficient that is not negligible
    deg = np.where(live, width - 1 - np.argmax(~small[:, ::-1], axis=1), -1)
    rows_out, roots_out = [], []
    for d in range(1, width):
        idx = np.flatnonzero(deg == d)
        if idx.size == 0:
            continue
        cd = c[idx, :d + 1]
        if d == 1:
            rows_out.append(idx)
            roots_out.append(-cd[:, 0] / cd[:, 1])
            continue
        if d == 2:
            r1, r2, ok = _quadratic(cd[:, 0], cd[:, 1], cd[:, 2])
            rows_out += [idx[ok], idx[ok]]
            roots_out += [r1[ok], r2[ok]]
            continue
        lead = cd[:, d]
        comp = np.zeros((idx.size, d, d))
        comp[:, 1:, :-1] = np.eye(d - 1)
        comp[:, :, -1] = -cd[:, :d] / lead[:, None]
        ev = np.linalg.eigvals(comp)
        re, im = ev.real, ev.imag
        keep = np.abs(im) <= 1e-6 * np.maximum(1.0, np.abs(re))
        r_idx = np.repeat(idx[:, None], d, axis=1)[keep]
        rows_out.append(r_idx)
        roots_out.append(re[keep])
    if not rows_out:
        return np.zeros(0, dtype=int), np.zeros(0)
    rows = np.concatenate(rows_out)
    xs = np.concatenate(roots_out)
    if polish and rows.size:
        pc = c[rows]
        dc = _polyder(pc)
        for _ in range(polish):
            f = polyval(pc, xs)
            fp = polyval(dc, xs)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(np.abs(fp) > 1e-300, f / fp, 0.0)
            # accept the Newton step only where it reduces |p|
            cand = xs - step
            better = np.abs(polyval(pc, cand)) < np.abs(f)
            xs = np.where(better & np.isfinite(cand), cand, xs)
    m = (xs >= lo) & (xs <= hi)
    return rows[m], xs[m]
