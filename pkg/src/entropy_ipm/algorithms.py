"""Step-length rules and the two path-following drivers.

``run_wide`` keeps iterates in the one-sided neighborhood
``u_j >= 1 - beta`` and takes the longest admissible step along an entropy
direction, with ``eta`` fixed, chosen by a plane search, or given by the
two-value rule.  ``run_predictor_corrector`` alternates an affine predictor
limited to ``N2(1/2)`` with a full centering step.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import centrality, directions, plane_search
from .directions import DirectionPair, NewtonSystem
from .hsd import (HsdProblem, HsdState, SolveOutcome, Status, extract, hlp_residuals,
                  initial_state)
from .linalg import NumericalRankError
from .stopping import R_MAX, stopping_check

ALPHA_CAP = plane_search.ALPHA_CAP
STALL_ALPHA = 1e-14
DISC_GUARD = 1e-30


class ComplexityBoundViolation(RuntimeError):
    """A predictor step came out shorter than ``1/(50 sqrt N)``."""


# -------------------------------------------------------- step geometry

def step_quadratic(rep, dp: DirectionPair, beta):
    """Per-coordinate ``A a^2 + B a + C >= 0`` describing ``u_j(a) >= 1 - beta``.

    ``mu(a)`` is the true gap of the trial point over ``N``, so this holds for
    any target, not only for ``w(eta)`` where ``mu(a) = (1 - a) mu``.
    """
    N, mu = rep.N, rep.mu
    vw = rep.v * dp.w
    pq = dp.pq
    A = (pq - (1 - beta) * pq.sum() / N) / mu
    B = (vw - (1 - beta) * vw.sum() / N) / mu
    C = rep.u - (1 - beta)
    return A, B, C


def first_exit(A, B, C):
    """Largest ``a_j`` with ``A a^2 + B a + C >= 0`` on ``[0, a_j]`` (``inf`` if never violated)."""
    A, B, C = np.broadcast_arrays(*(np.asarray(z, float) for z in (A, B, C)))
    out = np.full(A.shape, np.inf)
    sc = np.abs(A) + np.abs(B) + np.abs(C)
    lin = np.abs(A) <= 1e-15 * np.maximum(sc, 1e-300)
    neg = lin & (B < 0)
    out[neg] = np.maximum(-C[neg] / B[neg], 0.0)
    q = ~lin
    if np.any(q):
        Aq, Bq, Cq = A[q], B[q], C[q]
        disc = Bq * Bq - 4 * Aq * Cq
        real = disc >= -DISC_GUARD
        sq = np.sqrt(np.maximum(disc, 0.0))
        qq = -0.5 * (Bq + np.where(Bq >= 0, sq, -sq))
        with np.errstate(divide="ignore", invalid="ignore"):
            ra = np.where(qq != 0, qq / Aq, -Bq / (2 * Aq))
            rb = np.where(qq != 0, Cq / qq, ra)
        r1, r2 = np.minimum(ra, rb), np.maximum(ra, rb)
        res = np.full(Aq.shape, np.inf)
        up = Aq > 0
        m = up & real & (r2 > 0)
        res[m] = np.maximum(r1[m], 0.0)
        dn = ~up
        res[dn & real] = np.maximum(r2[dn & real], 0.0)
        res[dn & ~real] = 0.0
        out[q] = res
    return out


def max_step_ninf_minus(rep, dp: DirectionPair, beta=0.5, cap=ALPHA_CAP):
    A, B, C = step_quadratic(rep, dp, beta)
    return float(min(cap, np.min(first_exit(A, B, C))))


def trial_products(rep, dp: DirectionPair, alpha):
    """``x_j(a) s_j(a)`` predicted from the scaled split."""
    return rep.v ** 2 + alpha * rep.v * dp.w + alpha ** 2 * dp.pq


def n2_excess(rep, dp, alpha, beta, mu_ref=None):
    xs = trial_products(rep, dp, alpha)
    mu_a = xs.sum() / rep.N if mu_ref is None else mu_ref
    return float(np.linalg.norm(xs / mu_a - 1.0) - beta)


def max_step_n2(rep, dp: DirectionPair, beta=0.5, cap=ALPHA_CAP, halvings=80):
    """Bisection for the step to the boundary of ``N2(beta)``.

    The reference ``mu(a) = (1 - a) mu`` is that of an affine predictor.
    """
    def ok(al):
        xs = trial_products(rep, dp, al)
        if np.any(xs <= 0):
            return False
        return n2_excess(rep, dp, al, beta, (1 - al) * rep.mu) <= 0
    if ok(cap):
        return cap
    lo, hi = 0.0, cap
    for _ in range(halvings):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def quartic_coefficients(rep, dp: DirectionPair):
    """Quartic ``sum_k d_k a^k <= 0`` that suffices for the predictor to stay in ``N2(1/2)``.

    Obtained by expanding ``||x(a)s(a)/((1-a)mu) - e||^2 <= ||u - e||^2 + 3/16``
    for the ``eta = 1`` entropy direction; valid for points of ``N2(1/4)``.
    Returns ``(d0, d1, d2, d3, d4, B, C)``.
    """
    mu, delta = rep.mu, rep.delta
    xs = rep.v ** 2
    pq = dp.pq
    Bc = float(np.sum(xs * rep.log_u * pq))
    Cc = float(np.sum(xs * pq))
    sxs2 = float(np.sum(xs * xs))
    S1 = delta * sxs2 - rep.D21 * mu ** 2
    Q2 = delta ** 2 * sxs2 + rep.D22 * mu ** 2 - 2 * delta * rep.D21 * mu ** 2
    d0 = -3 * mu ** 2
    d1 = 32 * S1 + 6 * mu ** 2
    d2 = 16 * (Q2 + 2 * Cc) - d1 + 3 * mu ** 2
    d3 = 32 * (delta - 1) * Cc - 32 * Bc
    d4 = 16 * float(np.sum(pq * pq))
    return d0, d1, d2, d3, d4, Bc, Cc


def quartic_d2_variant(rep, dp):
    """Variant ``alpha^2`` coefficient using ``- d1 - 3 mu^2``; too small by ``6 mu^2`` to be sufficient."""
    d0, d1, d2, *_ = quartic_coefficients(rep, dp)
    return d2 - 6 * rep.mu ** 2


def quartic_step(coeffs):
    """Largest ``a`` in ``[0, 1)`` with the quartic nonpositive on ``[0, a]``."""
    d = np.asarray(coeffs[:5], float)
    r = np.roots(d[::-1])
    real = r[np.abs(r.imag) <= 1e-12 * np.maximum(1, np.abs(r.real))].real
    pos = np.sort(real[real > 0])
    return float(min(pos[0], 1.0)) if pos.size else 1.0


def step_condition_lhs(N, alpha):
    return 5 * N ** 2 * alpha ** 4 + 64 * N ** 1.5 * alpha ** 3 + 20 * N * alpha ** 2 + 7 * alpha


# ------------------------------------------------------------ records

@dataclass
class StepRecord:
    iteration: int
    alpha: float
    eta: float | None
    mu_before: float
    mu_after: float
    delta: float
    slack: float               # neighborhood slack after the step
    kind: str
    gap: float = 0.0
    theta: float = 0.0
    t: float = 0.0
    kappa: float = 0.0
    rp_inf: float = 0.0
    rd_inf: float = 0.0
    rg: float = 0.0
    criterion: float = np.inf
    identity_rel: float = 0.0  # |rhs theta - gap| / max(rhs theta, gap)
    extra: dict = field(default_factory=dict)

    @property
    def mu(self):
        return self.mu_after


@dataclass
class RunResult:
    outcome: SolveOutcome
    trace: list
    state: HsdState
    problem: HsdProblem
    wall_ms: float
    message: str = ""

    @property
    def iterations(self):
        return len(self.trace)

    @property
    def status(self):
        return self.outcome.status


@dataclass
class WideConfig:
    eta_mode: str = "fixed"     # fixed | heuristic | exact | two-value
    eta: float = 1.0
    beta: float = 0.5
    r_max: float = R_MAX
    max_iter: int = 1000
    limit_pairs: bool = True
    drift_correction: bool = False
    gap_eps: float | None = None    # stop on x's + t kappa <= gap_eps instead of the criterion


def combine(dv: DirectionPair, dt: DirectionPair, eta) -> DirectionPair:
    """``dv + eta * dt`` for the splits of ``-v`` and ``t``."""
    return DirectionPair(wp=dv.wp + eta * dt.wp, wq=dv.wq + eta * dt.wq,
                         dx=dv.dx + eta * dt.dx, ds=dv.ds + eta * dt.ds,
                         dy=dv.dy + eta * dt.dy, dt=dv.dt + eta * dt.dt,
                         dtheta=dv.dtheta + eta * dt.dtheta,
                         dkappa=dv.dkappa + eta * dt.dkappa)


def _positive(st: HsdState):
    return bool(np.all(st.x > 0) and np.all(st.s > 0) and st.t > 0 and st.kappa > 0)


def _record(k, alpha, eta, rep, hp, st, slack, kind, mu0, r_max, **extra):
    rep_new = centrality.report(st.xs)
    sr = stopping_check(hp, st, mu0, r_max)
    ident = abs(hp.rhs * st.theta - st.gap) / max(abs(hp.rhs * st.theta), st.gap)
    rec = StepRecord(iteration=k, alpha=alpha, eta=eta, mu_before=rep.mu, mu_after=st.mu,
                     delta=rep_new.delta, slack=slack, kind=kind, gap=st.gap,
                     theta=st.theta, t=st.t, kappa=st.kappa, rp_inf=sr.rp_inf,
                     rd_inf=sr.rd_inf, rg=sr.rg, criterion=sr.criterion,
                     identity_rel=ident, extra=extra)
    return rec, sr


def _done(sr, st, gap_eps):
    if gap_eps is None:
        return sr.converged
    return st.gap <= gap_eps or sr.infeasible


def _finish(hp, st, trace, t0, converged, message=""):
    if message.startswith("numerical"):
        out = SolveOutcome(Status.NUMERICAL_FAILURE, t=st.t, kappa=st.kappa)
    else:
        out = extract(hp, st, converged=converged)
    return RunResult(out, trace, st, hp, (time.perf_counter() - t0) * 1e3, message)


def run_wide(hp: HsdProblem, cfg: WideConfig | None = None, state: HsdState | None = None,
             callback=None) -> RunResult:
    """Wide-neighborhood path following with entropy directions."""
    cfg = cfg or WideConfig()
    t0 = time.perf_counter()
    st = state.copy() if state is not None else initial_state(hp)
    mu0 = st.mu
    beta = cfg.beta
    trace = []
    prev_slack = None
    for k in range(1, cfg.max_iter + 1):
        rep = centrality.report(st.xs)
        try:
            ns = NewtonSystem(hp, st)
            drift = hlp_residuals(hp, st) if cfg.drift_correction else None
            extra = {}
            if cfg.eta_mode == "fixed":
                eta = cfg.eta
                dp = ns.solve(directions.w_eta(rep, eta), drift=drift)
                alpha = max_step_ninf_minus(rep, dp, beta)
            elif cfg.eta_mode == "two-value":
                eta = directions.two_value_eta(rep)
                dp = ns.solve(directions.w_two_value(rep), drift=drift)
                alpha = max_step_ninf_minus(rep, dp, beta)
                extra["w_norm2"] = float(dp.w @ dp.w)
            elif cfg.eta_mode in ("heuristic", "exact"):
                dv = ns.solve(-rep.v, drift=drift)
                dtp = ns.solve(directions.entropy_part(rep))
                coef = plane_search.cs_coefficients(rep.u, rep.delta, rep.mu, dv, dtp, beta)
                if cfg.eta_mode == "exact":
                    res = plane_search.exact_search(coef, limit_pairs=cfg.limit_pairs,
                                                    prev_slack=prev_slack)
                else:
                    res = plane_search.heuristic_search(coef)
                eta = res.eta
                dp = combine(dv, dtp, eta)
                # the search guarantees admissibility; the closed-form step
                # along the chosen direction can only be longer
                alpha = min(res.alpha, max_step_ninf_minus(rep, dp, beta)) \
                    if res.fallback else res.alpha
                extra.update(candidates=res.candidates_examined, fallback=res.fallback)
            else:
                raise ValueError(f"unknown eta mode {cfg.eta_mode!r}")
        except (NumericalRankError, np.linalg.LinAlgError) as exc:
            return _finish(hp, st, trace, t0, False, f"numerical: {exc}")
        # verify on the actual update; shrink a little on rounding trouble
        for _ in range(4):
            new = st.step(dp, alpha)
            if _positive(new) and centrality.ninf_minus_slack(new.xs, beta) >= 0:
                break
            alpha *= 0.999
        else:
            return _finish(hp, st, trace, t0, False, "numerical: cannot stay in the neighborhood")
        if alpha < STALL_ALPHA:
            return _finish(hp, st, trace, t0, False, "numerical: step length stalled")
        slack = centrality.ninf_minus_slack(new.xs, beta)
        if cfg.eta_mode in ("heuristic", "exact"):
            prev_slack = coef.g(alpha * eta, alpha) / coef.scale
        rec, sr = _record(k, alpha, eta, rep, hp, new, slack, cfg.eta_mode, mu0, cfg.r_max,
                          mu_pred=(1 - alpha) * rep.mu, gap_before=rep.gap, **extra)
        trace.append(rec)
        st = new
        if callback is not None:
            callback(rec, st)
        if _done(sr, st, cfg.gap_eps):
            return _finish(hp, st, trace, t0, True)
    return _finish(hp, st, trace, t0, False, "iteration limit")


def _drift(hp, st, on):
    return hlp_residuals(hp, st) if on else None


def run_predictor_corrector(hp: HsdProblem, r_max=R_MAX, max_iter=1000, beta_pred=0.5,
                            beta_corr=0.25, enforce_bound=False, callback=None,
                            drift_correction=False, gap_eps=None) -> RunResult:
    """Entropy predictor (``eta = 1``) to ``N2(beta_pred)`` then one full centering step."""
    t0 = time.perf_counter()
    st = initial_state(hp)
    mu0 = st.mu
    N = hp.N
    floor = 1.0 / (50 * np.sqrt(N))
    trace = []
    for k in range(1, max_iter + 1):
        rep = centrality.report(st.xs)
        try:
            ns = NewtonSystem(hp, st)
            dp = ns.solve(directions.w_eta(rep, 1.0), drift=_drift(hp, st, drift_correction))
            alpha = max_step_n2(rep, dp, beta_pred)
            if alpha < floor and enforce_bound:
                raise ComplexityBoundViolation(f"predictor step {alpha:.3g} < {floor:.3g}")
            mid = st.step(dp, alpha)
            if not _positive(mid):
                return _finish(hp, st, trace, t0, False, "numerical: predictor left the orthant")
            rep_mid = centrality.report(mid.xs)
            if _done(stopping_check(hp, mid, mu0, r_max), mid, gap_eps):
                # the predictor alone met the criterion; a corrector this
                # close to the solution only adds linear-algebra error
                d_mid = centrality.n2_distance(mid.xs)
                rec, _ = _record(k, alpha, 1.0, rep, hp, mid, beta_pred - d_mid, "pc-final",
                                 mu0, r_max, mu_mid=rep_mid.mu, mu_pred=(1 - alpha) * rep.mu,
                                 n2_mid=d_mid, n2_after=d_mid, alpha_floor=floor)
                trace.append(rec)
                if callback is not None:
                    callback(rec, mid)
                return _finish(hp, mid, trace, t0, True)
            dc = NewtonSystem(hp, mid).solve(directions.w_corrector(rep_mid),
                                             drift=_drift(hp, mid, drift_correction))
            new = mid.step(dc, 1.0)
        except (NumericalRankError, np.linalg.LinAlgError) as exc:
            return _finish(hp, st, trace, t0, False, f"numerical: {exc}")
        if not _positive(new):
            return _finish(hp, st, trace, t0, False, "numerical: corrector left the orthant")
        dist = centrality.n2_distance(new.xs)
        if dist > beta_corr:
            return _finish(hp, st, trace, t0, False,
                           f"numerical: corrector left N2({beta_corr:g}) at distance {dist:.3g}")
        rec, sr = _record(k, alpha, 1.0, rep, hp, new, beta_corr - dist, "pc", mu0, r_max,
                          mu_mid=rep_mid.mu, mu_pred=(1 - alpha) * rep.mu,
                          n2_mid=centrality.n2_distance(mid.xs), n2_after=dist,
                          alpha_floor=floor)
        trace.append(rec)
        st = new
        if callback is not None:
            callback(rec, st)
        if _done(sr, st, gap_eps):
            return _finish(hp, st, trace, t0, True)
    return _finish(hp, st, trace, t0, False, "iteration limit")
