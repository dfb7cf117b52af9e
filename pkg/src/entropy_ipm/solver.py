"""Solve an MPS file end to end and write the iteration log and summary."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algorithms import RunResult, WideConfig, run_predictor_corrector, run_wide
from .hsd import embed
from .mps import LpProblem, load_lp
from .stopping import R_MAX

CSV_HEADER = ("iter", "mu", "delta", "alpha", "eta", "gap", "theta", "t", "kappa",
              "rp_inf", "rd_inf", "rg", "criterion")
ETA_MODES = ("fixed", "heuristic", "exact", "two-value")
DATA_DIR = Path(__file__).resolve().parent / "data"


def netlib_path(name):
    """Path of a bundled NETLIB deck, e.g. ``netlib_path("afiro")``."""
    p = DATA_DIR / "netlib" / f"{name}.mps"
    if not p.exists():
        raise FileNotFoundError(f"no bundled deck named {name!r}")
    return p


def bundled_problems():
    return sorted(p.stem for p in (DATA_DIR / "netlib").glob("*.mps"))


def parse_eta(text):
    """``fixed:<v>`` or one of ``heuristic``, ``exact``, ``two-value``."""
    text = text.strip()
    if text.startswith("fixed:"):
        v = float(text.split(":", 1)[1])
        if not np.isfinite(v) or v < 0:
            raise ValueError("fixed eta must be a finite nonnegative number")
        return "fixed", v
    if text in ETA_MODES[1:]:
        return text, 1.0
    raise ValueError(f"bad eta mode {text!r}; use fixed:<v>, heuristic, exact or two-value")


def eta_label(mode, eta):
    return f"fixed:{eta:g}" if mode == "fixed" else mode


@dataclass
class RunConfig:
    algorithm: str = "wide"
    eta_mode: str = "fixed"
    eta: float = 1.0
    beta: float = 0.5
    r_max: float = R_MAX
    max_iter: int = 1000
    log_path: str | None = None
    summary_path: str | None = None
    gap_eps: float | None = None

    def __post_init__(self):
        if self.algorithm not in ("wide", "pc"):
            raise ValueError("algorithm must be 'wide' or 'pc'")
        if self.eta_mode not in ETA_MODES:
            raise ValueError(f"eta mode must be one of {ETA_MODES}")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if self.eta_mode == "two-value" and self.beta > 0.5:
            raise ValueError("the two-value direction is defined for beta <= 1/2")
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def run(lp: LpProblem, cfg: RunConfig) -> RunResult:
    hp = embed(lp)
    if cfg.algorithm == "pc":
        return run_predictor_corrector(hp, r_max=cfg.r_max, max_iter=cfg.max_iter,
                                       gap_eps=cfg.gap_eps)
    wc = WideConfig(eta_mode=cfg.eta_mode, eta=cfg.eta, beta=cfg.beta, r_max=cfg.r_max,
                    max_iter=cfg.max_iter, gap_eps=cfg.gap_eps)
    return run_wide(hp, wc)


def trace_rows(res: RunResult):
    for r in res.trace:
        yield (r.iteration, r.mu_after, r.delta, r.alpha, r.eta, r.gap, r.theta, r.t,
               r.kappa, r.rp_inf, r.rd_inf, r.rg, r.criterion)


def write_trace_csv(res: RunResult, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for row in trace_rows(res):
            w.writerow([row[0]] + [repr(float(v)) for v in row[1:]])


def summary(res: RunResult):
    last = res.trace[-1] if res.trace else None
    obj = res.outcome.objective
    return {
        "status": res.status.value,
        "iterations": res.iterations,
        "objective": None if obj is None else float(obj),
        "t": float(res.state.t),
        "kappa": float(res.state.kappa),
        "criterion": None if last is None else float(last.criterion),
        "wall-ms": round(res.wall_ms, 3),
    }


def solve(path, cfg: RunConfig | None = None):
    """Read, embed and solve ``path``.  Returns ``(RunResult, summary dict)``."""
    cfg = cfg or RunConfig()
    res = run(load_lp(path), cfg)
    summ = summary(res)
    if res.message:
        summ["message"] = res.message
    if cfg.log_path:
        write_trace_csv(res, cfg.log_path)
    if cfg.summary_path:
        with open(cfg.summary_path, "w") as fh:
            json.dump(summ, fh, indent=2)
    return res, summ
