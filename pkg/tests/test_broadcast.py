import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe import broadcast as br
from bsfe.algebra import BitVector
from bsfe.channel import MemoryLedger
from bsfe.circuits import load_fixture
from bsfe.errors import BudgetExhausted, Expired, LedgerViolation, ParameterError
from bsfe.transcript import Clock, Transcript


def drain(h):
    n = 0
    while True:
        try:
            br.br_eval(h, 0, br.ADVERSARY)
        except BudgetExhausted:
            return n
        n += 1


def test_reference_cap():
    assert drain(br.br_setup(lambda x: x, 128, 10, 16, clock=Clock())) == 4


@given(st.integers(0, 5000), st.integers(1, 64))
def test_cap_is_floor_rule(s, m_out):
    h = br.br_setup(lambda x: x, s, 10, m_out, clock=Clock())
    assert drain(h) == s // (2 * m_out) == h.adversary_budget


def test_adversary_outside_window():
    clock = Clock()
    h = br.br_setup(lambda x: x, 1000, 5, 4, clock=clock, t_start=2)
    with pytest.raises(Expired):
        br.br_eval(h, 0, br.ADVERSARY)
    clock.set(3)
    br.br_eval(h, 0, br.ADVERSARY)
    clock.set(6)
    with pytest.raises(Expired):
        br.br_eval(h, 0, br.ADVERSARY)


def test_closed_window():
    h = br.br_setup(lambda x: x, 1000, 50, 4, clock=Clock())
    br.br_close(h)
    with pytest.raises(Expired):
        br.br_eval(h, 0, br.ADVERSARY)


def test_honest_charge_and_unlimited_use():
    C = load_fixture("adder2")
    h = br.br_setup(C, 36, 10, clock=Clock())
    assert h.honest_mem_charge == 12 * 3
    led = MemoryLedger("honest", 36)
    for v in range(16):
        assert br.br_eval(h, BitVector(v, 4), ledger=led).value == (v & 3) + (v >> 2)
    assert led.peak == 36 and led.stored == 0 and led.ok


def test_honest_over_budget_raises():
    h = br.br_setup(load_fixture("and"), 100, 10, clock=Clock())
    with pytest.raises(LedgerViolation):
        br.br_eval(h, BitVector(0, 2), ledger=MemoryLedger("honest", 11))


def test_short_output_warns():
    assert br.br_setup(load_fixture("and"), 100, 10, clock=Clock()).warnings
    assert not br.br_setup(lambda x: x, 100, 10, 8, clock=Clock()).warnings


def test_bit_unit_scales_length():
    h = br.br_setup(lambda x: x, 640, 10, 4, clock=Clock(), unit="bit", symbol_bits=8)
    assert h.m_out == 32 and h.adversary_budget == 10


def test_bad_parameters():
    with pytest.raises(ParameterError):
        br.br_setup(lambda x: x, 10, 10, clock=Clock())
    with pytest.raises(ParameterError):
        br.br_setup(lambda x: x, 10, 10, 1, unit="byte", clock=Clock())
    with pytest.raises(ParameterError):
        br.br_setup(lambda x: x, 10, 0, 1, clock=Clock(), t_start=3)


def test_transcript_events():
    tr = Transcript()
    h = br.br_setup(lambda x: x, 64, 10, 8, transcript=tr)
    br.br_eval(h, 1, br.ADVERSARY)
    br.br_close(h)
    assert [e["ev"] for e in tr.events] == ["br_setup", "br_eval", "br_close"]
