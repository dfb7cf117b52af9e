import numpy as np
import pytest

from entropy_ipm.algorithms import WideConfig, run_predictor_corrector, run_wide
from entropy_ipm.hsd import (Status, embed, extract, hlp_matrix, hlp_residuals, initial_state)
from entropy_ipm.stopping import R_MAX, criterion_value, stopping_check

from conftest import CLASSIFIED, SMALL_SIX, as_arrays, lp, wide_run

ONE = (np.array([[1.0]]), np.array([1.0]), np.array([1.0]))


def test_one_by_one_embedding():
    hp = embed(ONE)
    assert hp.bbar.tolist() == [0.0] and hp.cbar.tolist() == [0.0]
    assert hp.zbar == 2.0 and hp.rhs == 2.0


def test_one_by_one_matrix():
    # variables (y, x, t, theta); hand assembly of the four blocks
    expect = [[0, 1, -1, 0],
              [-1, 0, 1, 0],
              [1, -1, 0, 2],
              [0, 0, -2, 0]]
    np.testing.assert_array_equal(hlp_matrix(embed(ONE)), expect)


def test_zero_data():
    hp = embed((np.zeros((1, 2)), np.zeros(1), np.zeros(2)), drop_redundant=False)
    np.testing.assert_array_equal(hp.bbar, 0)
    np.testing.assert_array_equal(hp.cbar, -1)
    assert hp.zbar == 1.0


@pytest.mark.parametrize("name", SMALL_SIX)
def test_canonical_start(name):
    hp = embed(lp(name))
    n = hp.n
    np.testing.assert_allclose(hp.bbar, hp.b - hp.A @ np.ones(n))
    np.testing.assert_allclose(hp.cbar, hp.c - 1)
    assert hp.zbar == pytest.approx(hp.c.sum() + 1)
    assert hp.rhs == n + 1
    st = initial_state(hp)
    r = hlp_residuals(hp, st)
    assert r.max_abs <= 1e-12 * r.scale
    assert r.identity == 0.0          # (n + 1) * 1 = n * 1 + 1 * 1


def test_skew_symmetry(rng):
    A = rng.standard_normal((3, 5))
    hp = embed((A, rng.standard_normal(3), rng.standard_normal(5)))
    G = hlp_matrix(hp)
    np.testing.assert_array_equal(G, -G.T)


def test_bad_start_rejected():
    with pytest.raises(ValueError):
        embed(ONE, x0=np.array([0.0]))


@pytest.mark.parametrize("case", sorted(CLASSIFIED))
@pytest.mark.parametrize("mode", ["fixed", "exact", "two-value", "pc"])
def test_classification(case, mode):
    data, expect = CLASSIFIED[case]
    hp = embed(as_arrays(data))
    res = run_predictor_corrector(hp) if mode == "pc" else run_wide(hp, WideConfig(eta_mode=mode))
    assert res.status.value == expect
    if expect == "optimal":
        assert res.outcome.t > 0
    else:
        assert res.status.exit_code == 0 and res.outcome.certificate


def test_unbounded_single_column():
    # min -x  s.t.  0 x = 0, x >= 0
    hp = embed(([[0.0]], [0.0], [-1.0]))
    assert run_wide(hp).status is Status.DUAL_INFEASIBLE


def test_extract_on_injected_optimum():
    hp = embed(ONE)
    st = initial_state(hp)
    st.x[:] = 1.0; st.y[:] = 1.0; st.s[:] = 0.0; st.t = 1.0; st.kappa = 0.0; st.theta = 0.0
    assert criterion_value(hp, st)[3] == 0.0
    out = extract(hp, st)
    assert out.status is Status.OPTIMAL and out.objective == 1.0


def test_extract_iteration_limit():
    hp = embed(ONE)
    assert extract(hp, initial_state(hp), converged=False).status is Status.ITERATION_LIMIT


def test_negative_gap_residual_is_ignored():
    hp = embed(ONE)
    st = initial_state(hp)
    st.x[:] = 1.0; st.y[:] = 2.0; st.s[:] = 0.0; st.t = 1.0
    # feasible primal, dual residual 1, c'x - b'y = -1 < 0
    rp_inf, rd_inf, rg, crit = criterion_value(hp, st)
    assert rp_inf == 0.0 and rd_inf == 1.0 and rg == -1.0
    assert crit == 2 * rd_inf / (1 + 1)


@pytest.mark.parametrize("name", SMALL_SIX)
def test_trajectory_identity_and_theta(name):
    res = wide_run(name)
    assert res.status is Status.OPTIMAL
    assert max(r.identity_rel for r in res.trace) <= 1e-8
    assert res.state.theta <= 1e-8 * 1.0
    assert res.trace[-1].criterion <= R_MAX
    assert stopping_check(res.problem, res.state, res.trace[0].mu_before).optimal
