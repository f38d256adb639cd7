import random

import numpy as np
import pytest

from bsfe.channel import (CROSS, PLUS, HonestMeasure, MemoryLedger, QuantumMessage, Qubit, RandomBasis,
                          StoreFirst, measure, transmit)
from bsfe.errors import ConsumedError, LedgerViolation, ShapeError
from bsfe.transcript import Transcript


def msg_of(T, m, seed=0):
    g = np.random.default_rng(seed)
    bits = g.integers(0, 2, (T, m), dtype=np.uint8)
    bases = g.integers(0, 2, (T, m), dtype=np.uint8)
    return bits, bases, QuantumMessage(bits, bases)


def test_single_qubit_measured_once():
    q = Qubit(1, CROSS)
    assert measure(q, CROSS, random.Random(0)) == 1
    with pytest.raises(ConsumedError):
        measure(q, CROSS, random.Random(0))


def test_wrong_basis_is_uniform():
    rng = random.Random(4)
    ones = sum(measure(Qubit(1, PLUS), CROSS, rng) for _ in range(20000))
    assert abs(ones / 20000 - 0.5) < 0.02


def test_matching_bases_reproduce_bits():
    bits, bases, msg = msg_of(3, 200)
    out = transmit(msg, HonestMeasure(bases), MemoryLedger("r", 0), np.random.default_rng(1))
    assert (out.bits == bits).all()


def test_mismatched_positions_are_noise():
    bits, bases, msg = msg_of(1, 40000)
    out = transmit(msg, RandomBasis(), MemoryLedger("r", 0), np.random.default_rng(2))
    wrong = out.bases != bases
    agree = (out.bits == bits)[wrong].mean()
    assert abs(agree - 0.5) < 0.02
    assert (out.bits == bits)[~wrong].all()


def test_message_delivered_once():
    _, bases, msg = msg_of(1, 8)
    transmit(msg, HonestMeasure(bases), MemoryLedger("r", 0), np.random.default_rng(0))
    with pytest.raises(ConsumedError):
        transmit(msg, HonestMeasure(bases), MemoryLedger("r", 0), np.random.default_rng(0))


def test_bound_enforced_per_run():
    _, _, msg = msg_of(4, 50)
    tr = Transcript()
    with pytest.raises(LedgerViolation):
        transmit(msg, StoreFirst(11), MemoryLedger("adv", 10), np.random.default_rng(0), tr)
    assert tr.of("bound_apply")[0]["stored"] == 11


def test_bound_recorded_without_enforcement():
    _, _, msg = msg_of(4, 50)
    led = MemoryLedger("adv", 10, enforce=False)
    out = transmit(msg, StoreFirst(11), led, np.random.default_rng(0))
    assert out.violations == 4 and len(led.violations) == 4 and led.peak == 11


def test_stored_qubits_measured_later_in_right_basis():
    bits, bases, msg = msg_of(2, 30)
    out = transmit(msg, StoreFirst(10), MemoryLedger("adv", 10), np.random.default_rng(0))
    late = out.stored.measure(bases, np.random.default_rng(1))
    assert (late[:, :10] == bits[:, :10]).all()
    with pytest.raises(ConsumedError):
        out.stored.measure(bases, np.random.default_rng(1))


def test_ledger_hold_release():
    led = MemoryLedger("h", 5)
    led.hold(4)
    assert led.check()
    led.hold(2)
    with pytest.raises(LedgerViolation):
        led.check()
    led.release(6)
    assert led.stored == 0 and led.peak == 6


def test_bad_markers():
    with pytest.raises(ShapeError):
        QuantumMessage(np.zeros((1, 4)), np.zeros((1, 4)), bound_markers=(5,))
