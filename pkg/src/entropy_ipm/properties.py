"""Randomised checks of the inequalities behind the entropy direction family.

Points are drawn through their ``u`` vectors: ``u`` is sampled inside the
requested neighborhood with ``e'u = N``, then ``x`` is lognormal and
``s = mu u / x`` for ``mu = 10^U(-3, 3)``.  Every property is evaluated on the
products ``x * s`` actually formed, so rounding is part of the test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import centrality, directions
from .algorithms import quartic_coefficients, quartic_step
from .centrality import CentralityReport
from .directions import StandardSystem

NEIGHBORHOODS = ("N2", "Ninf", "NinfMinus")
REL = 1e-12            # relative slack for floating-point comparisons
MAX_SHOWN = 5          # counterexamples kept per property


@dataclass
class SampleSpec:
    neighborhood: str = "Ninf"
    beta: float = 0.25
    dims: tuple = (2, 20)
    samples: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.neighborhood not in NEIGHBORHOODS:
            raise ValueError(f"neighborhood must be one of {NEIGHBORHOODS}")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if self.dims[0] < 2 or self.dims[1] < self.dims[0]:
            raise ValueError("dims must be (lo, hi) with 2 <= lo <= hi")


# ---------------------------------------------------------------- sampling

def sample_u(rng, N, neighborhood, beta, tries=1000):
    """One ``u`` with ``sum(u) = N`` inside the neighborhood."""
    for _ in range(tries):
        if neighborhood == "N2":
            d = rng.standard_normal(N)
            d -= d.mean()
            nd = np.linalg.norm(d)
            if nd == 0:
                continue
            r = beta * rng.random() ** (1.0 / max(N - 1, 1))
            u = 1.0 + r * d / nd
        elif neighborhood == "Ninf":
            u = 1.0 + beta * rng.uniform(-1, 1, N)
            u += 1.0 - u.mean()
        else:
            u = (1 - beta) + beta * N * rng.dirichlet(np.ones(N))
        if _member(u, neighborhood, beta):
            return u
    raise RuntimeError("rejection sampling failed")


def _member(u, neighborhood, beta):
    xs = np.asarray(u, float)
    if np.any(xs <= 0):
        return False
    if neighborhood == "N2":
        return centrality.in_n2(xs, beta)
    if neighborhood == "Ninf":
        return centrality.in_ninf(xs, beta)
    return centrality.in_ninf_minus(xs, beta)


def sample_point(rng, spec: SampleSpec, N=None):
    """``(x, s)`` with ``x * s / mu`` in the requested neighborhood."""
    N = N or int(rng.integers(spec.dims[0], spec.dims[1] + 1))
    while True:
        u = sample_u(rng, N, spec.neighborhood, spec.beta)
        mu = 10.0 ** rng.uniform(-3, 3)
        x = np.exp(rng.normal(0.0, 1.0, N))
        s = mu * u / x
        if _member(x * s, spec.neighborhood, spec.beta):
            return x, s


def random_constraints(rng, N):
    """Dense Gaussian ``A`` with ``1 <= m < N`` rows."""
    m = int(rng.integers(1, N))
    return rng.standard_normal((m, N))


# -------------------------------------------------------------- properties

def _le(a, b):
    return a <= b + REL * max(abs(a), abs(b), 1e-300)


@dataclass
class Sample:
    x: np.ndarray
    s: np.ndarray
    rep: CentralityReport
    A: np.ndarray | None = None
    _sys: StandardSystem | None = None
    _dirs: dict = field(default_factory=dict)

    @property
    def N(self):
        return self.x.size

    @property
    def system(self):
        if self._sys is None:
            self._sys = StandardSystem(self.A, self.x, self.s)
        return self._sys

    def direction(self, eta):
        if eta not in self._dirs:
            self._dirs[eta] = self.system.solve(directions.w_eta(self.rep, eta))
        return self._dirs[eta]


def _delta_nonneg(sm: Sample, beta):
    rep = sm.rep
    dev = float(np.max(np.abs(rep.u - 1)))
    if rep.delta < 0:
        return {"delta": rep.delta}
    if dev > 1e-8 and rep.delta <= 0:
        return {"delta": rep.delta, "max|u-1|": dev}
    if not _le(rep.delta, dev * dev):
        # delta <= ||u - e||^2 / N <= max|u-1|^2, so delta -> 0 with the deviation
        return {"delta": rep.delta, "max|u-1|": dev}
    return None


def _delta_sandwich(sm: Sample, beta):
    rep = sm.rep
    r2 = float(np.sum((rep.u - 1) ** 2))
    lo = (1 - 3 * beta) / (2 * (1 - beta) * sm.N) * r2
    hi = r2 / sm.N
    if _le(lo, rep.delta) and _le(rep.delta, hi):
        return None
    return {"lower": lo, "delta": rep.delta, "upper": hi}


def _w1_bracket(sm: Sample, beta):
    """Componentwise bracket on ``w(1)``."""
    rep = sm.rep
    w = directions.w_eta(rep, 1.0)
    base = rep.mu / rep.v
    lo = (rep.delta - 2 - beta ** 2 / (4 * beta ** 2 - 6 * beta + 2)) * rep.v + base
    hi = (rep.delta - 2) * rep.v + base
    tol = REL * (np.abs(rep.v) + np.abs(base))
    bad = np.flatnonzero((w < lo - tol) | (w > hi + tol))
    if bad.size:
        j = int(bad[0])
        return {"j": j, "lower": lo[j], "w": w[j], "upper": hi[j]}
    return None


def xi_zeta(beta):
    """Constants of the bracket ``xi N delta <= Delta_ij <= zeta N delta``."""
    lm, lp = math.log(1 - beta), math.log(1 + beta)
    return {
        "xi21": 3 * (1 - beta) + 2 * (1 - beta) * lm,
        "zeta21": 3 * (1 + beta) + 2 * (1 + beta) * lp,
        "xi22": 2 * (1 - beta) + 6 * (1 - beta) * lm + 6 * (1 - beta) * lm ** 2,
        "zeta22": 2 * (1 + beta) + 6 * (1 + beta) * lp + 6 * (1 + beta) * lp ** 2,
    }


def _xi_zeta(sm: Sample, beta):
    rep = sm.rep
    k = xi_zeta(beta)
    nd = sm.N * rep.delta
    for lab, val in (("21", rep.D21), ("22", rep.D22)):
        if not (_le(k["xi" + lab] * nd, val) and _le(val, k["zeta" + lab] * nd)):
            return {"Delta" + lab: val, "xi*N*delta": k["xi" + lab] * nd,
                    "zeta*N*delta": k["zeta" + lab] * nd}
    return None


def _delta21_22(sm: Sample, beta):
    rep = sm.rep
    nd = sm.N * rep.delta
    ok = _le(1.8 * nd, rep.D21) and _le(rep.D21, 4.5 * nd) and \
        (rep.D22 < 5 * nd or nd == 0.0 and rep.D22 == 0.0)
    return None if ok else {"N*delta": nd, "Delta21": rep.D21, "Delta22": rep.D22}


def _delta12_upper(sm: Sample, beta):
    rep = sm.rep
    hi = 2 * (math.log(sm.N) + 1) * sm.N * rep.delta
    if rep.D12 >= 0 and _le(rep.D12, hi):
        return None
    return {"Delta12": rep.D12, "bound": hi}


def _delta12_lower(sm: Sample, beta):
    rep = sm.rep
    lo = sm.N * rep.delta ** 2
    return None if _le(lo, rep.D12) else {"N*delta^2": lo, "Delta12": rep.D12}


def _quartic_bounds(sm: Sample, beta):
    rep = sm.rep
    dp = sm.direction(1.0)
    d0, d1, d2, d3, d4, *_ = quartic_coefficients(rep, dp)
    N, mu2 = sm.N, rep.mu ** 2
    bounds = {"d1": 7 * mu2, "d2": 20 * N * mu2, "d3": 64 * N ** 1.5 * mu2, "d4": 5 * N ** 2 * mu2}
    vals = {"d1": d1, "d2": d2, "d3": d3, "d4": d4}
    for k, b in bounds.items():
        if not _le(vals[k], b):
            return {k: vals[k], "bound": b, "N": N}
    return None


def _quartic_sufficient(sm: Sample, beta):
    """The quartic condition keeps the predictor inside ``N2(1/2)``."""
    rep = sm.rep
    dp = sm.direction(1.0)
    coeffs = quartic_coefficients(rep, dp)
    amax = quartic_step(coeffs)
    for a in np.linspace(0.0, amax, 9)[1:]:
        a = min(a, 1 - 1e-8)
        xs = (sm.x + a * sm.system.D * dp.wp) * (sm.s + a * dp.wq / sm.system.D)
        dist = float(np.linalg.norm(xs / ((1 - a) * rep.mu) - 1.0))
        if np.any(xs <= 0) or dist > 0.5 + 1e-9:
            return {"alpha": a, "quartic_root": amax, "n2": dist}
    return None


def _mizuno(sm: Sample, beta):
    dp = sm.direction(1.0)
    lhs = float(np.linalg.norm(dp.pq))
    rhs = math.sqrt(2) / 4 * float(dp.w @ dp.w)
    return None if _le(lhs, rhs) else {"||wp*wq||": lhs, "bound": rhs}


GAP_ETAS = (0.0, 1.0, 2.0, 4.0)
GAP_ALPHAS = (0.1, 0.5, 0.9)
NORM_ETAS = (0.0, 0.5, 1.0, 2.0, 4.0)
IDENTITY_TOL = 1e-8


def _gap_identity(sm: Sample, beta):
    rep = sm.rep
    gap = float(sm.x @ sm.s)
    sysm = sm.system
    for eta in GAP_ETAS:
        dp = sm.direction(eta)
        for a in GAP_ALPHAS:
            g = float((sm.x + a * dp.dx) @ (sm.s + a * dp.ds))
            if abs(g - (1 - a) * gap) > IDENTITY_TOL * gap:
                return {"eta": eta, "alpha": a, "gap(alpha)": g, "(1-alpha)gap": (1 - a) * gap}
    dc = sysm.solve(directions.w_corrector(rep))
    g = float((sm.x + dc.dx) @ (sm.s + dc.ds))
    if abs(g - gap) > IDENTITY_TOL * gap:
        return {"corrector gap": g, "gap": gap}
    return None


def _norm_identity(sm: Sample, beta):
    rep = sm.rep
    for eta in NORM_ETAS:
        w = directions.w_eta(rep, eta)
        lhs = float(w @ w)
        rhs = directions.norm_identity(rep, eta)
        if abs(lhs - rhs) > IDENTITY_TOL * max(abs(rhs), 1e-300):
            return {"eta": eta, "||w||^2": lhs, "closed form": rhs}
    return None


def _two_value_norm(sm: Sample, beta):
    rep = sm.rep
    w = directions.w_two_value(rep)
    lhs = float(w @ w)
    return None if _le(lhs, rep.gap) else {"||w||^2": lhs, "N*mu": rep.gap}


@dataclass(frozen=True)
class Property:
    name: str
    check: object
    applies: object               # (neighborhood, beta) -> bool
    needs_system: bool = False


def _in_ninf(nb, beta):
    # N2(beta) is contained in Ninf(beta)
    return nb in ("N2", "Ninf")


def _in_ninf_minus(nb, beta, limit):
    return beta <= limit and nb in NEIGHBORHOODS


PROPERTIES = (
    Property("delta >= 0, zero only on the path", _delta_nonneg, lambda nb, b: True),
    Property("delta sandwich", _delta_sandwich, lambda nb, b: _in_ninf(nb, b) and b < 1),
    Property("bracket on w(1)", _w1_bracket, lambda nb, b: _in_ninf(nb, b) and b < 0.5),
    Property("xi/zeta brackets", _xi_zeta, lambda nb, b: _in_ninf(nb, b) and b <= 0.25),
    Property("Delta21, Delta22 vs N delta", _delta21_22,
             lambda nb, b: _in_ninf(nb, b) and b <= 0.25),
    Property("0 <= Delta12 <= 2(ln N + 1) N delta", _delta12_upper,
             lambda nb, b: _in_ninf_minus(nb, b, 0.5)),
    Property("Delta12 >= N delta^2", _delta12_lower, lambda nb, b: True),
    Property("quartic coefficient bounds d1..d4", _quartic_bounds, lambda nb, b: nb == "N2" and b <= 0.25, True),
    Property("quartic condition is sufficient", _quartic_sufficient, lambda nb, b: nb == "N2" and b <= 0.25, True),
    Property("Mizuno: ||wp*wq|| <= sqrt(2)/4 ||w||^2", _mizuno, lambda nb, b: True, True),
    Property("gap identity and corrector gap", _gap_identity, lambda nb, b: True, True),
    Property("norm identity ||w(eta)||^2", _norm_identity, lambda nb, b: True),
    Property("two-value target: ||w||^2 <= N mu", _two_value_norm,
             lambda nb, b: _in_ninf_minus(nb, b, 0.5)),
)


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    failures: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self):
        return self.checked > 0 and self.failures == 0


@dataclass
class LemmaReport:
    spec: SampleSpec
    results: list

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def lines(self):
        tag = f"{self.spec.neighborhood}({self.spec.beta:g})"
        out = []
        for r in self.results:
            verdict = "PASS" if r.passed else "FAIL"
            out.append(f"{verdict} [{tag}] {r.name}: {r.checked} checked, {r.failures} failed")
            out += [f"    counterexample: {c}" for c in r.counterexamples]
        return out


def run_lemma_suite(spec: SampleSpec, names=None) -> LemmaReport:
    """Every applicable property evaluated on ``spec.samples`` fresh points."""
    rng = np.random.default_rng(spec.seed)
    props = [p for p in PROPERTIES if p.applies(spec.neighborhood, spec.beta)
             and (names is None or p.name in names)]
    results = {p.name: PropertyResult(p.name) for p in props}
    need_sys = any(p.needs_system for p in props)
    for k in range(spec.samples):
        x, s = sample_point(rng, spec)
        sm = Sample(x, s, centrality.report(x * s))
        if need_sys:
            sm.A = random_constraints(rng, sm.N)
        for p in props:
            res = results[p.name]
            res.checked += 1
            bad = p.check(sm, spec.beta)
            if bad is not None:
                res.failures += 1
                if len(res.counterexamples) < MAX_SHOWN:
                    res.counterexamples.append({"sample": k, "N": sm.N, **bad})
    return LemmaReport(spec, list(results.values()))


def log_bracket(alpha):
    """``(lower, ln(1 + alpha), upper)`` for ``|alpha| < 1``."""
    return alpha - alpha ** 2 / (2 * (1 - abs(alpha))), math.log1p(alpha), alpha


def run_log_bracket(samples=1000, seed=0):
    rng = np.random.default_rng(seed)
    res = PropertyResult("logarithm bracket")
    for a in rng.uniform(-0.999, 0.999, samples):
        lo, mid, hi = log_bracket(float(a))
        res.checked += 1
        if not (_le(lo, mid) and _le(mid, hi)):
            res.failures += 1
            if len(res.counterexamples) < MAX_SHOWN:
                res.counterexamples.append({"alpha": a, "lower": lo, "ln": mid, "upper": hi})
    return res


def delta12_witness(N):
    """``Delta12 / (N delta)`` at ``u = (1/2, ..., 1/2, (N+1)/2)``."""
    u = np.full(N, 0.5)
    u[-1] = (N + 1) / 2
    rep = centrality.report(u)
    return rep.D12 / (N * rep.delta)


DEFAULT_SPECS = (("N2", 0.25), ("Ninf", 0.25), ("NinfMinus", 0.5))


def run_default_suites(samples=1000, seed=0, dims=(2, 20)):
    """The three neighborhood suites plus the scalar check and the witness."""
    reports = [run_lemma_suite(SampleSpec(nb, b, dims, samples, seed + i))
               for i, (nb, b) in enumerate(DEFAULT_SPECS)]
    return reports, run_log_bracket(samples, seed), delta12_witness(64)
