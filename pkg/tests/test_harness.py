import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe import harness as hx
from bsfe.errors import ParameterError


@given(st.integers(0, 500), st.integers(1, 500))
def test_wilson_contains_estimate(k, n):
    if k > n:
        return
    lo, hi = hx.wilson(k, n)
    assert 0 <= lo <= k / n <= hi <= 1


def test_wilson_reference_value():
    # closed form at k=5, n=10, z=1.959964
    z = 1.959963984540054
    c = (0.5 + z * z / 20) / (1 + z * z / 10)
    h = z * math.sqrt(0.25 / 10 + z * z / 400) / (1 + z * z / 10)
    lo, hi = hx.wilson(5, 10)
    assert lo == pytest.approx(c - h, abs=1e-9) and hi == pytest.approx(c + h, abs=1e-9)


def test_honest_receiver_always_gets_chosen_branch():
    r = hx.run_ot_sender_security(hx.ExperimentSpec("ot-sender", "honest", 2000, 4))
    assert r.extra["chosen_branch_rate"] == 1.0 and r.violations == 0


@pytest.mark.parametrize("name", ["s-storage", "fixed-basis", "random-basis"])
def test_ot_strategies_stay_near_guessing(name):
    r = hx.run_ot_sender_security(hx.ExperimentSpec("ot-sender", name, 5000, 2))
    assert r.estimate <= r.extra["bound"] + (r.ci_high - r.estimate)
    assert r.violations == 0 and r.extra["params_ok"]


def test_full_storage_breaks_the_bound():
    spec = hx.ExperimentSpec("ot-sender", "full-storage", 500, 1, {"enforce": False})
    r = hx.run_ot_sender_security(spec)
    assert r.violations > 0 and r.estimate > 0.9


def test_undersized_m_is_flagged():
    r = hx.run_ot_sender_security(hx.ExperimentSpec("ot-sender", "honest", 10, 0, {"m": 16, "s": 4}))
    assert not r.extra["params_ok"]


@pytest.mark.parametrize("name", sorted(hx.IND_STRATEGIES))
def test_ind_strategies_run(name):
    r = hx.run_ind_game(hx.ExperimentSpec("cbqs-ind", name, 6, 3))
    assert r.trials == 6 and r.violations == 0
    if name == "distinguishing-query":
        assert r.extra["disqualified"] == 6 and r.successes == 0


def test_unknown_strategies():
    with pytest.raises(ParameterError):
        hx.run_ind_game(hx.ExperimentSpec("cbqs-ind", "nope", 1))
    with pytest.raises(ParameterError):
        hx.run_forgetting(hx.ExperimentSpec("bcs-forget", "nope", 1))


def test_half_row_forgetting_fails():
    r = hx.run_forgetting(hx.ExperimentSpec("bcs-forget", "half-row", 50, 0, {"n": 16}))
    assert r.successes == 0 and r.extra["unknown_bits"] > 0


def test_results_are_deterministic():
    a = hx.run_ind_game(hx.ExperimentSpec("cbqs-ind", "store-s", 5, 11))
    b = hx.run_ind_game(hx.ExperimentSpec("cbqs-ind", "store-s", 5, 11))
    assert a.to_record() == b.to_record()
