"""Bounded classical storage runtime.

A :class:`Stream` hands out fixed-size chunks once, in order.  Parties
consume it with :func:`stream_fold`, which measures the state they carry
between chunks on a :class:`BitLedger`.  :func:`wgb_obfuscate` is the
ideal obfuscation oracle: filler stream plus a query-capped, closable
evaluation handle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .algebra import BitVector
from .errors import BudgetExhausted, Expired, LedgerViolation, ShapeError, StreamReread
from .transcript import Transcript

CHUNK_BITS = 64
WGB_QUERY_CAP = 1 << 20


class Stream:
    """Single-pass sequence of ``(value, nbits)`` chunks totalling ``total_len`` bits."""

    def __init__(self, chunks: Iterable[tuple[int, int]], total_len: int, chunk_bits: int = CHUNK_BITS,
                 transcript: Transcript | None = None, label: str = "stream"):
        self._chunks = iter(chunks)
        self.total_len = total_len
        self.chunk_bits = chunk_bits
        self.consumed = False
        self.transcript = transcript
        self.label = label

    @classmethod
    def from_bits(cls, bits: BitVector, chunk_bits: int = CHUNK_BITS, **kw) -> Stream:
        return cls(_chunk_int(bits.value, bits.length, chunk_bits), bits.length, chunk_bits, **kw)

    @classmethod
    def from_words(cls, words: Iterable[BitVector], total_len: int, chunk_bits: int = CHUNK_BITS,
                   **kw) -> Stream:
        """Lazy stream over a sequence of bit strings (e.g. matrix rows)."""
        return cls(rechunk(words, chunk_bits), total_len, chunk_bits, **kw)

    @classmethod
    def filler(cls, total_len: int, chunk_bits: int = CHUNK_BITS, **kw) -> Stream:
        return cls(_chunk_int(0, total_len, chunk_bits), total_len, chunk_bits, **kw)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        if self.consumed:
            raise StreamReread()
        self.consumed = True
        if self.transcript is not None:
            self.transcript.emit("stream_begin", label=self.label, bits=self.total_len, chunk=self.chunk_bits)
        for k, chunk in enumerate(self._chunks):
            if self.transcript is not None:
                self.transcript.emit("chunk", label=self.label, k=k, bits=chunk[1])
            yield chunk

    def tee(self, k: int) -> list[Stream]:
        """k independent single-pass copies, as if broadcast to k parties."""
        if self.consumed:
            raise StreamReread()
        self.consumed = True
        return [Stream(it, self.total_len, self.chunk_bits, self.transcript, f"{self.label}[{j}]")
                for j, it in enumerate(itertools.tee(self._chunks, k))]


def _chunk_int(value: int, length: int, size: int):
    mask = (1 << size) - 1
    for start in range(0, length, size):
        yield (value >> start) & mask, min(size, length - start)


def rechunk(words: Iterable[BitVector], size: int = CHUNK_BITS):
    """Concatenate bit strings (first word in the low bits) and cut into chunks."""
    buf, nbuf = 0, 0
    for w in words:
        buf |= w.value << nbuf
        nbuf += w.length
        while nbuf >= size:
            yield buf & ((1 << size) - 1), size
            buf >>= size
            nbuf -= size
    if nbuf:
        yield buf, nbuf


class RowReader:
    """Reassembles fixed-width rows from chunks.  Carries < width bits."""

    def __init__(self, width: int):
        self.width = width
        self.buf = 0
        self.nbuf = 0

    def feed(self, value: int, nbits: int) -> list[int]:
        self.buf |= value << self.nbuf
        self.nbuf += nbits
        rows = []
        while self.nbuf >= self.width:
            rows.append(self.buf & ((1 << self.width) - 1))
            self.buf >>= self.width
            self.nbuf -= self.width
        return rows

    @property
    def carried_bits(self) -> int:
        return self.nbuf


@dataclass
class BitLedger:
    """Classical memory carried across chunk boundaries, in bits."""

    owner: str
    budget: int
    enforce: bool = True
    retained: int = 0
    peak: int = 0
    violations: list = field(default_factory=list)
    transcript: Transcript | None = field(default=None, repr=False)

    def carry(self, bits: int, where: str = "chunk") -> bool:
        self.retained = int(bits)
        self.peak = max(self.peak, self.retained)
        if self.retained <= self.budget:
            return True
        rec = {"owner": self.owner, "stored": self.retained, "budget": self.budget, "at": where}
        self.violations.append(rec)
        if self.transcript is not None:
            self.transcript.emit("ledger_violation", **rec)
        if self.enforce:
            raise LedgerViolation(self.owner, self.retained, self.budget)
        return False

    @property
    def ok(self) -> bool:
        return not self.violations


def stream_fold(stream: Stream, state, fn: Callable, ledger: BitLedger | None = None,
                size: Callable[[object], int] | None = None):
    """``state = fn(state, value, nbits)`` per chunk; ``size(state)`` bits are
    charged to ``ledger`` after every chunk."""
    for value, nbits in stream:
        state = fn(state, value, nbits)
        if ledger is not None:
            ledger.carry(size(state) if size is not None else _default_size(state))
    return state


def _default_size(state) -> int:
    if isinstance(state, BitVector):
        return state.length
    if isinstance(state, int):
        return max(1, state.bit_length())
    if hasattr(state, "bits_carried"):
        return state.bits_carried()
    raise ShapeError("fold state size unknown; pass size=")


# -- ideal obfuscation -------------------------------------------------------

def wgb_query_budget(lam: int, cap: int = WGB_QUERY_CAP) -> int:
    return min(cap, 1 << math.ceil(math.sqrt(lam)))


@dataclass
class WgbHandle:
    program: Callable
    query_budget: int
    query_count: int = 0
    window_open: bool = True
    transcript: Transcript | None = field(default=None, repr=False)

    def close(self) -> None:
        self.window_open = False


def wgb_obfuscate(program: Callable, n: int, m: int, lam: int = 16, stream_bits: int | None = None,
                  query_budget: int | None = None, transcript: Transcript | None = None):
    """Filler stream longer than the adversary memory ``m`` plus the oracle.

    ``n`` is the honest memory the evaluator is allowed; the ideal oracle
    itself needs none, so it only sets the default stream length.
    """
    total = stream_bits if stream_bits is not None else max(2 * m, n) + 1
    h = WgbHandle(program, query_budget if query_budget is not None else wgb_query_budget(lam),
                  transcript=transcript)
    return Stream.filler(total, label="wgb", transcript=transcript), h


def wgb_eval(h: WgbHandle, x):
    if not h.window_open:
        raise Expired()
    if h.query_count >= h.query_budget:
        raise BudgetExhausted()
    h.query_count += 1
    y = h.program(x)
    if h.transcript is not None:
        h.transcript.emit("wgb_eval", n=h.query_count)
    return y


def wgb_close(h: WgbHandle) -> None:
    h.close()
