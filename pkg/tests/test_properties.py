import math

import numpy as np
import pytest

from entropy_ipm import centrality, properties
from entropy_ipm.properties import (Property, SampleSpec, delta12_witness, log_bracket,
                                    run_lemma_suite, run_log_bracket, sample_point)


@pytest.mark.parametrize("kw", [dict(neighborhood="NE"), dict(beta=0.0), dict(beta=1.0),
                                dict(dims=(1, 5)), dict(dims=(6, 5))])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        SampleSpec(**kw)


@pytest.mark.parametrize("nb, beta", [("N2", 0.25), ("Ninf", 0.25), ("NinfMinus", 0.5)])
def test_samples_lie_in_their_neighborhood(nb, beta):
    rng = np.random.default_rng(1)
    check = {"N2": centrality.in_n2, "Ninf": centrality.in_ninf,
             "NinfMinus": centrality.in_ninf_minus}[nb]
    for _ in range(300):
        x, s = sample_point(rng, SampleSpec(nb, beta))
        assert check(x * s, beta)


def test_log_bracket_at_half():
    lo, mid, hi = log_bracket(0.5)
    assert lo == pytest.approx(0.25) and hi == 0.5
    assert mid == pytest.approx(math.log(1.5)) and round(mid, 3) == 0.405
    assert lo <= mid <= hi
    assert run_log_bracket(500).passed


def test_d4_bound_spot_check():
    rep = run_lemma_suite(SampleSpec("N2", 0.25, samples=200, seed=5),
                          names={"quartic coefficient bounds d1..d4"})
    assert rep.results[0].checked == 200 and rep.passed


def test_witness_is_tight_within_a_constant():
    assert delta12_witness(64) >= 0.3 * math.log(64)


def test_suite_is_deterministic_per_seed():
    spec = SampleSpec("Ninf", 0.25, samples=40, seed=11)
    a, b = run_lemma_suite(spec), run_lemma_suite(spec)
    assert a.lines() == b.lines()


@pytest.mark.parametrize("nb, beta", properties.DEFAULT_SPECS)
def test_suite_passes(nb, beta):
    rep = run_lemma_suite(SampleSpec(nb, beta, samples=300, seed=2))
    assert rep.passed, "\n".join(rep.lines())
    assert len(rep.results) >= 6


def test_counterexamples_are_reported(monkeypatch):
    bogus = Property("delta <= 0", lambda sm, b: None if sm.rep.delta <= 0 else {"delta": sm.rep.delta},
                     lambda nb, b: True)
    monkeypatch.setattr(properties, "PROPERTIES", (bogus,))
    rep = run_lemma_suite(SampleSpec(samples=20, seed=0))
    r = rep.results[0]
    assert not rep.passed and r.failures == 20
    assert len(r.counterexamples) == properties.MAX_SHOWN
    assert any(ln.startswith("FAIL") for ln in rep.lines())
    assert "counterexample: {'sample': 0" in "\n".join(rep.lines())
