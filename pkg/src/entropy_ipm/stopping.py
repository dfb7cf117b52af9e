"""Termination test on the LP recovered from an embedding iterate."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hsd import HsdProblem, HsdState, lp_residuals

R_MAX = 1e-9
INFEAS_RATIO = 1e-7
INFEAS_MU = 1e-12


@dataclass
class StoppingReport:
    rp_inf: float
    rd_inf: float
    rg: float
    criterion: float
    optimal: bool
    infeasible: bool

    @property
    def converged(self):
        return self.optimal or self.infeasible


def criterion_value(hp: HsdProblem, st: HsdState):
    """``2|rp|/(1+|b|) + 2|rd|/(1+|c|) + rg+ / max(|c'x|, |b'y|, 1)`` at ``(x, y, s)/t``."""
    rp, rd, rg = lp_residuals(hp, st)
    rp_inf = float(np.max(np.abs(rp), initial=0.0))
    rd_inf = float(np.max(np.abs(rd), initial=0.0))
    bnorm = float(np.max(np.abs(hp.b), initial=0.0))
    cnorm = float(np.max(np.abs(hp.c), initial=0.0))
    cx = abs(float(hp.c @ st.x / st.t))
    by = abs(float(hp.b @ st.y / st.t))
    crit = (2 * rp_inf / (1 + bnorm) + 2 * rd_inf / (1 + cnorm)
            + max(rg, 0.0) / max(cx, by, 1.0))
    return rp_inf, rd_inf, rg, crit


def stopping_check(hp: HsdProblem, st: HsdState, mu0, r_max=R_MAX) -> StoppingReport:
    rp_inf, rd_inf, rg, crit = criterion_value(hp, st)
    optimal = bool(crit <= r_max)
    infeasible = bool(st.t / st.kappa < INFEAS_RATIO and st.mu <= INFEAS_MU * mu0)
    return StoppingReport(rp_inf, rd_inf, rg, crit, optimal, infeasible and not optimal)
