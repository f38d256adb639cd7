import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe import ot
from bsfe.algebra import BitVector
from bsfe.channel import MemoryLedger
from bsfe.errors import InsecureParameters, ScheduleError
from bsfe.transcript import Transcript


def test_qubit_count():
    assert ot.required_qubits(8, 32) == 384
    assert ot.params_ok(384, 8, 32)
    assert not ot.params_ok(383, 8, 32)


def test_too_few_qubits_rejected():
    inp = ot.OtSenderInput(BitVector(0, 8), BitVector(0, 8), 100, 8, 32)
    with pytest.raises(InsecureParameters):
        ot.ot_send(inp, random.Random(0))


@given(st.integers(0, 2**32), st.integers(0, 1), st.integers(1, 24), st.integers(0, 40))
def test_receiver_gets_chosen_string(seed, c, ell, s):
    rng = random.Random(seed)
    m = ot.required_qubits(ell, s)
    s0, s1 = BitVector.random(ell, rng), BitVector.random(ell, rng)
    msg, ann = ot.ot_send(ot.OtSenderInput(s0, s1, m, ell, s), rng)
    assert ot.ot_receive(c, msg, ann, rng) == (s1 if c else s0)


def test_announcement_waits_for_bound():
    rng = random.Random(0)
    _, ann = ot.ot_send(ot.OtSenderInput(BitVector(1, 8), BitVector(2, 8), 384, 8, 32), rng)
    with pytest.raises(ScheduleError):
        ann.reveal()


@pytest.mark.parametrize("seed", range(20))
def test_sender_view_independent_of_choice(seed):
    views = []
    for c in (0, 1):
        srng = random.Random(seed)
        tr = Transcript()
        s0, s1 = BitVector.random(8, srng), BitVector.random(8, srng)
        msg, ann = ot.ot_send(ot.OtSenderInput(s0, s1, 384, 8, 32), srng, tr)
        ot.ot_receive(c, msg, ann, random.Random(100 + c), transcript=Transcript())
        views.append(tr.to_jsonl())
    assert views[0] == views[1]
    assert {e["ev"] for e in map(__import__("json").loads, views[0].splitlines())} == {"qubit_send", "ot_announce"}


def test_batch_decode_matches_single_runs():
    g = np.random.default_rng(3)
    T, ell, m = 50, 8, 384
    s0 = g.integers(0, 2, (T, ell), dtype=np.uint8)
    s1 = g.integers(0, 2, (T, ell), dtype=np.uint8)
    msg, deferred = ot.send_batch(s0, s1, m, g)
    c = g.integers(0, 2, T, dtype=np.uint8)
    from bsfe.channel import transmit

    out = transmit(msg, ot.ChoiceReceiver(c, m), MemoryLedger("r", 0), g)
    y = ot.decode_batch(c, out.bits, deferred.reveal())
    assert (y == np.where(c[:, None] == 1, s1, s0)).all()


def test_pack_unpack_roundtrip():
    g = np.random.default_rng(0)
    bits = g.integers(0, 2, (9, 70), dtype=np.uint8)
    assert (ot.unpack_rows(ot.pack_rows(bits), 70) == bits).all()


def test_hash_matches_reference_toeplitz():
    g = np.random.default_rng(5)
    T, m, ell = 6, 40, 8
    x = g.integers(0, 2, (T, m), dtype=np.uint8)
    mask = g.integers(0, 2, (T, m), dtype=np.uint8).astype(bool)
    seeds = g.integers(0, 2, (T, m + ell - 1), dtype=np.uint8)
    got = ot.toeplitz_masked(x, mask, seeds, ell)
    for t in range(T):
        sel = x[t][mask[t]]
        k = sel.size
        ref = [int(sum(seeds[t, j + i] & sel[i] for i in range(k)) % 2) for j in range(ell)]
        assert got[t].tolist() == ref
