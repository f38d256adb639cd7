import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe import bcsm
from bsfe.algebra import BitVector
from bsfe.errors import BudgetExhausted, Expired, LedgerViolation, ShapeError, StreamReread
from bsfe.transcript import Transcript


@given(st.integers(0, 2**300), st.integers(1, 300), st.integers(1, 70))
def test_stream_reassembles(value, length, chunk):
    bits = BitVector(value & ((1 << length) - 1), length)
    acc, pos = 0, 0
    for v, k in bcsm.Stream.from_bits(bits, chunk):
        assert k <= chunk
        acc |= v << pos
        pos += k
    assert (acc, pos) == (bits.value, length)


def test_single_pass():
    s = bcsm.Stream.from_bits(BitVector(5, 3))
    list(s)
    with pytest.raises(StreamReread):
        list(s)
    with pytest.raises(StreamReread):
        s.tee(2)


def test_tee_gives_independent_copies():
    a, b = bcsm.Stream.from_bits(BitVector(0xABCDE, 20), 8).tee(2)
    assert list(a) == list(b) == [(0xDE, 8), (0xBC, 8), (0xA, 4)]


@given(st.lists(st.integers(1, 40), min_size=1, max_size=20), st.integers(1, 33), st.integers(0, 2**32))
def test_rechunk_and_row_reader(widths, size, seed):
    import random

    rng = random.Random(seed)
    words = [BitVector.random(w, rng) for w in widths]
    width = widths[0]
    total = sum(widths)
    concat = 0
    for w in reversed(words):
        concat = (concat << w.length) | w.value
    rr = bcsm.RowReader(width)
    rows = []
    for v, k in bcsm.rechunk(words, size):
        rows += rr.feed(v, k)
        assert rr.carried_bits < width
    assert len(rows) == total // width
    for i, r in enumerate(rows):
        assert r == (concat >> (i * width)) & ((1 << width) - 1)


def test_bit_ledger_enforces():
    led = bcsm.BitLedger("x", 10)
    led.carry(10)
    with pytest.raises(LedgerViolation):
        led.carry(11)
    soft = bcsm.BitLedger("x", 10, enforce=False)
    assert not soft.carry(12) and soft.peak == 12 and len(soft.violations) == 1


def test_stream_fold_charges_state():
    led = bcsm.BitLedger("x", 64)
    total = bcsm.stream_fold(bcsm.Stream.from_bits(BitVector(2**40 - 1, 40), 8),
                             0, lambda s, v, k: s + bin(v).count("1"), led)
    assert total == 40 and led.peak == 6


def test_fold_needs_size_for_unknown_state():
    with pytest.raises(ShapeError):
        bcsm.stream_fold(bcsm.Stream.from_bits(BitVector(1, 1)), object(), lambda s, v, k: s,
                         bcsm.BitLedger("x", 10))


def test_wgb_budget_and_expiry():
    assert bcsm.wgb_query_budget(16) == 16
    assert bcsm.wgb_query_budget(10**6) == bcsm.WGB_QUERY_CAP
    stream, h = bcsm.wgb_obfuscate(lambda x: x + 1, 8, 20, query_budget=2)
    assert stream.total_len == 41
    assert bcsm.wgb_eval(h, 1) == 2 and bcsm.wgb_eval(h, 2) == 3
    with pytest.raises(BudgetExhausted):
        bcsm.wgb_eval(h, 3)
    _, h2 = bcsm.wgb_obfuscate(lambda x: x, 8, 20)
    bcsm.wgb_close(h2)
    with pytest.raises(Expired):
        bcsm.wgb_eval(h2, 0)


def test_stream_transcript():
    tr = Transcript()
    list(bcsm.Stream.from_bits(BitVector(0, 130), transcript=tr, label="m"))
    assert tr.of("stream_begin")[0]["bits"] == 130
    assert [e["bits"] for e in tr.of("chunk")] == [64, 64, 2]
