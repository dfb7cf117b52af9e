import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entropy_ipm import centrality
from entropy_ipm.properties import sample_u

# (0.5 ln 0.5 + 1.5 ln 1.5) / 2, evaluated in 30-digit arithmetic
DELTA_HALF = 0.130812035941136959


def test_central_point():
    rep = centrality.centrality_report(np.ones(3), np.ones(3))
    assert rep.mu == 1.0
    np.testing.assert_array_equal(rep.u, 1.0)
    assert rep.delta == rep.D21 == rep.D12 == rep.D22 == 0.0


def test_two_point_delta():
    rep = centrality.report(np.array([0.5, 1.5]))
    assert rep.delta == pytest.approx(DELTA_HALF, rel=1e-14)


def test_nonpositive_coordinate_is_named():
    with pytest.raises(ValueError, match="product 1 "):
        centrality.report(np.array([1.0, -1.0, 2.0]))


def test_memberships():
    e = np.ones(4)
    for beta in (0.1, 0.25, 0.5):
        assert centrality.in_n2(e, beta) and centrality.in_ninf(e, beta)
        assert centrality.in_ninf_minus(e, beta)
    for beta in (0.5, 1.5):             # N_E is stated for beta >= 1/2
        assert centrality.in_ne(e, beta)
    assert not centrality.in_ne(np.array([0.2, 1.8]), 0.5)
    assert not centrality.in_ninf_minus(np.array([0.4, 1.6]), 0.5)


def test_delta_is_cancellation_free_near_centre():
    u = 1.0 + 1e-9 * np.array([1.0, -1.0])
    # sum u ln u ~ sum (u - 1)^2 / 2
    assert centrality.delta_of_u(u) == pytest.approx(0.5e-18, rel=1e-6)


def test_nesting(rng):
    for _ in range(10_000):
        N = int(rng.integers(2, 21))
        u = sample_u(rng, N, "N2", 0.25)
        assert centrality.in_ninf(u, 0.25)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 20), st.sampled_from(["N2", "Ninf", "NinfMinus"]),
       st.integers(0, 2 ** 32 - 1))
def test_report_invariants(N, nb, seed):
    rng = np.random.default_rng(seed)
    beta = 0.5 if nb == "NinfMinus" else 0.25
    u = sample_u(rng, N, nb, beta)
    mu = 10.0 ** rng.uniform(-3, 3)
    rep = centrality.report(mu * u)
    assert rep.u.sum() == pytest.approx(N, rel=1e-10)
    assert rep.delta >= 0
    assert rep.D12 >= N * rep.delta ** 2 - 1e-10 * max(1.0, rep.D12)
    if nb == "Ninf":
        nd = N * rep.delta
        assert 1.8 * nd <= rep.D21 * (1 + 1e-12) and rep.D21 <= 4.5 * nd * (1 + 1e-12)
        assert rep.D22 < 5 * nd * (1 + 1e-12)
