"""Shared fixtures: bundled decks, frozen oracle values and cached solver runs."""
from __future__ import annotations

import functools

import numpy as np
import pytest

from entropy_ipm import solver
from entropy_ipm.algorithms import run_predictor_corrector
from entropy_ipm.hsd import embed
from entropy_ipm.mps import load_lp

SMALL_SIX = ("afiro", "sc50a", "sc50b", "blend", "adlittle", "share2b")

# scipy.optimize.linprog (HiGHS) on the standard form of each bundled deck,
# mapped back through the transform log; frozen.  They agree with the
# published NETLIB optima.
ORACLE_OBJECTIVE = {
    "afiro": -464.75314285714285,
    "sc50a": -64.57507705856449,
    "sc50b": -69.99999999999999,
    "blend": -30.812149845828223,
    "adlittle": 225494.96316238042,
    "share2b": -415.73224074141916,
}

# small LPs given as (A, b, c) with their Goldman-Tucker classification
CLASSIFIED = {
    "primal_inf": (([[1.0, 1.0]], [-1.0], [1.0, 1.0]), "primal-infeasible"),
    "dual_inf": (([[1.0, -1.0]], [0.0], [-1.0, 0.0]), "dual-infeasible"),
    "both_inf": (([[0.0, 1.0]], [-1.0], [-1.0, 0.0]), "primal-and-dual-infeasible"),
    "no_rows_unbounded": ((np.zeros((0, 1)), [], [-1.0]), "dual-infeasible"),
    "no_rows_optimal": ((np.zeros((0, 2)), [], [1.0, 2.0]), "optimal"),
    "conflicting_rows": (([[1.0], [1.0]], [1.0, 2.0], [0.0]), "primal-infeasible"),
    "dependent_rows": (([[1.0, 1.0], [2.0, 2.0]], [1.0, 2.0], [1.0, 2.0]), "optimal"),
}


def as_arrays(data):
    A, b, c = data
    c = np.array(c, float)
    return np.array(A, float).reshape(len(b), c.size), np.array(b, float), c


@functools.cache
def lp(name):
    return load_lp(solver.netlib_path(name))


@functools.cache
def wide_run(name, mode="fixed", eta=1.0):
    return solver.run(lp(name), solver.RunConfig(eta_mode=mode, eta=eta))


@functools.cache
def pc_run(name):
    return run_predictor_corrector(embed(lp(name)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
