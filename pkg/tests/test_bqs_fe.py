import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe import bqs_fe as fe
from bsfe.algebra import BitVector
from bsfe.builder import CircuitClass
from bsfe.channel import MemoryLedger
from bsfe.circuits import eval_circuit, fixtures, load_fixture
from bsfe.errors import BudgetExhausted, ParameterError, ScheduleError, ShapeError
from bsfe.transcript import Clock


@given(st.integers(2, 5000), st.integers(1, 50))
def test_block_size_is_smallest_even_cover(s, r):
    if r >= s:
        return
    m = fe.block_size(s, r)
    assert m % 2 == 0 and m * m * r >= 4 * s
    smaller = m - 2
    assert smaller < 2 or smaller * smaller * r < 4 * s


def test_reference_parameters():
    p = fe.BqsFeParams(32, 2, 16, 16)
    assert p.m == 8 and p.mr == 16 and p.peak_bound == 96
    assert p.budget == 12 * p.m


def test_honest_budget_floor():
    with pytest.raises(ParameterError):
        fe.BqsFeParams(32, 2, 16, 16, honest_budget=3)
    fe.BqsFeParams(32, 2, 16, 16, honest_budget=4)


def test_rejects_bad_r():
    with pytest.raises(ParameterError):
        fe.BqsFeParams(4, 4, 16, 16)


@given(st.integers(0, 2**32))
def test_key_identity(seed):
    rng = random.Random(seed)
    p = fe.BqsFeParams(32, 2, 16, 16)
    msec = fe.bqsfe_setup(16, 32, 2, rng, params=p)
    F = p.gf
    v = BitVector.random(p.mr, rng)
    z = rng.getrandbits(16)
    Mv = [y for i in range(p.r) for y in fe.row_block(msec, i, v)]
    cols = [y for i in range(p.r) for y in fe.column_block(msec, i, z)]
    lhs = fe.select_sum(cols, v)
    # reference: sum_j Mv_j z^j with field elements
    rhs, zp = F(0), F(1)
    for y in Mv:
        rhs = rhs + F(y) * zp
        zp = zp * F(z)
    assert lhs == rhs.value == fe.horner(F, Mv, z)


def run(params, C, x, rng, backend="kil", cls=None, ledger=None):
    clock = Clock()
    msec = fe.bqsfe_setup(params.lam, params.s, params.r, rng, clock=clock, params=params)
    ledger = ledger or fe.honest_ledger(params)
    pk = fe.bqsfe_pk_phase(msec, clock)
    k_v = fe.bqsfe_pk_receive(pk, params, rng, ledger)
    fe.close_all(pk)
    mk = fe.bqsfe_mk_phase(msec, clock)
    sk = fe.bqsfe_mk_receive(mk, params, C, ledger)
    fe.close_all(mk)
    ct = fe.bqsfe_enc(k_v, x, params, backend, rng=rng, cls=cls)
    return sk, ct, ledger


@pytest.mark.parametrize("name", ["and", "adder2", "mux", "parity4"])
def test_end_to_end(name):
    C = fixtures()[name]
    params = fe.BqsFeParams(32, 2, 16, fe.class_width(list(fixtures().values())))
    rng = random.Random(name)
    for v in range(1 << C.n_inputs):
        x = BitVector(v, C.n_inputs)
        sk, ct, led = run(params, C, x, rng)
        assert fe.bqsfe_dec(sk, ct) == eval_circuit(C, x)
        assert led.ok and 0 < led.peak <= params.peak_bound


def test_ciphertext_single_use():
    C = load_fixture("and")
    params = fe.BqsFeParams(32, 2, 16, 99)
    sk, ct, _ = run(params, C, BitVector(3, 2), random.Random(0))
    fe.bqsfe_dec(sk, ct)
    with pytest.raises(BudgetExhausted):
        fe.bqsfe_dec(sk, ct)


def test_tampered_key_rejected():
    C = load_fixture("and")
    params = fe.BqsFeParams(32, 2, 16, 99)
    sk, ct, _ = run(params, C, BitVector(3, 2), random.Random(1))
    vals = list(sk.values)
    vals[0] = params.gf(vals[0].value ^ 1)
    assert fe.bqsfe_dec(fe.FuncKey(sk.C_enc, tuple(vals)), ct) is None


def test_key_for_other_circuit_gives_its_output():
    params = fe.BqsFeParams(32, 2, 16, 169)
    sk, ct, _ = run(params, load_fixture("or"), BitVector(1, 2), random.Random(2))
    assert fe.bqsfe_dec(sk, ct) == BitVector(1, 1)


def test_broadcast_outside_window():
    params = fe.BqsFeParams(32, 2, 16, 16)
    clock = Clock()
    msec = fe.bqsfe_setup(16, 32, 2, random.Random(0), clock=clock, params=params)
    clock.set(msec.T[1])
    with pytest.raises(ScheduleError):
        fe.bqsfe_pk_send(msec, 0, clock)
    with pytest.raises(ScheduleError):
        fe.bqsfe_mk_send(msec, 0, clock)


def test_schedule_has_two_r_windows():
    p = fe.BqsFeParams(40, 3, 8, 8)
    T = p.schedule(5)
    assert len(T) == 2 * p.r + 1 and T[0] == 5


def test_tight_ledger_violates():
    C = load_fixture("and")
    params = fe.BqsFeParams(32, 2, 16, 99)
    from bsfe.errors import LedgerViolation

    with pytest.raises(LedgerViolation):
        run(params, C, BitVector(0, 2), random.Random(0), ledger=MemoryLedger("receiver", params.m))


def test_peak_under_bound_for_several_sizes():
    for s, r in [(16, 1), (64, 4), (200, 2)]:
        params = fe.BqsFeParams(s, r, 16, 99)
        _, _, led = run(params, load_fixture("and"), BitVector(1, 2), random.Random(s))
        assert led.peak <= params.peak_bound + 24
        assert led.peak == 12 * params.m


@pytest.mark.parametrize("name", ["and", "xor"])
def test_garbled_backend_tiny(name):
    cls = CircuitClass(2, 1, 1)
    params = fe.BqsFeParams(4, 1, 8, cls.w)
    C = fixtures()[name]
    rng = random.Random(name)
    for v in range(4):
        x = BitVector(v, 2)
        sk, ct, _ = run(params, C, x, rng, "yao", cls)
        assert fe.bqsfe_dec(sk, ct, rng) == eval_circuit(C, x)


def test_enc_validates():
    params = fe.BqsFeParams(32, 2, 16, 16)
    k = fe.EncKey(BitVector(1, 3), ())
    with pytest.raises(ShapeError):
        fe.bqsfe_enc(k, BitVector(0, 2), params)
    with pytest.raises(ParameterError):
        fe.bqsfe_enc(k, BitVector(0, 2), params, backend="nope")
