"""Simulated BB84 channel with memory-bound events.

A message holds a batch of independent runs: arrays of shape
(runs, qubits).  Senders prepare (bit, basis) pairs; receivers only see
them through ``transmit``, which applies a strategy's per-qubit
decisions.  Measuring in the preparation basis yields the bit, otherwise
a fresh uniform bit drawn from the receiver's generator.  Qubits a
strategy keeps become an opaque ``StoredQubits`` handle, charged to its
``MemoryLedger`` when the bound fires.  Qubits neither measured nor
stored are discarded at the bound.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsumedError, LedgerViolation, ShapeError
from .transcript import Transcript

PLUS, CROSS = 0, 1


class Qubit:
    """A single BB84 state; measuring consumes it."""

    __slots__ = ("_bit", "_basis", "consumed")

    def __init__(self, bit: int, basis: int):
        if bit not in (0, 1) or basis not in (PLUS, CROSS):
            raise ValueError("bit and basis must be 0 or 1")
        self._bit, self._basis = bit, basis
        self.consumed = False

    def __repr__(self):
        return f"Qubit(consumed={self.consumed})"


def measure(q: Qubit, basis: int, rng) -> int:
    if q.consumed:
        raise ConsumedError()
    q.consumed = True
    return q._bit if basis == q._basis else rng.getrandbits(1)


def _digest(*arrays) -> str:
    h = hashlib.blake2b(digest_size=16)
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()


class QuantumMessage:
    """BB84 qubits for ``runs`` independent runs, ``width`` qubits each.

    ``bound_markers`` are qubit offsets after which the memory bound
    applies.  Every protocol here uses a single marker at the end.
    """

    def __init__(self, bits: np.ndarray, bases: np.ndarray, bound_markers=None):
        bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
        bases = np.atleast_2d(np.asarray(bases, dtype=np.uint8))
        if bits.shape != bases.shape:
            raise ShapeError("bits and bases differ in shape")
        self._bits, self._bases = bits, bases
        width = bits.shape[1]
        self.bound_markers = tuple(bound_markers) if bound_markers is not None else (width,)
        if any(not 0 < p <= width for p in self.bound_markers) or list(self.bound_markers) != sorted(set(self.bound_markers)):
            raise ShapeError("bound markers must be increasing offsets within the message")
        self.delivered = False
        self.bound_applied = False

    @property
    def shape(self) -> tuple[int, int]:
        return self._bits.shape

    @property
    def runs(self) -> int:
        return self._bits.shape[0]

    @property
    def width(self) -> int:
        return self._bits.shape[1]

    def __len__(self):
        return self._bits.size

    def digest(self) -> str:
        return _digest(self._bits, self._bases)

    def qubits(self, run: int = 0) -> list[Qubit]:
        """Independent single-qubit copies of one run (sender-side helper)."""
        return [Qubit(int(b), int(t)) for b, t in zip(self._bits[run], self._bases[run])]


class StoredQubits:
    """Qubits held in quantum memory; measured later, once."""

    def __init__(self, bits, bases, mask):
        self._bits, self._bases = bits, bases
        self.mask = mask            # public: which positions are stored
        self.consumed = False

    def count_per_run(self) -> np.ndarray:
        return self.mask.sum(axis=1)

    def measure(self, bases: np.ndarray, gen: np.random.Generator) -> np.ndarray:
        """Results at stored positions (0 elsewhere); consumes the handle."""
        if self.consumed:
            raise ConsumedError()
        self.consumed = True
        bases = np.broadcast_to(np.asarray(bases, dtype=np.uint8), self.mask.shape)
        noise = gen.integers(0, 2, size=self.mask.shape, dtype=np.uint8)
        out = self._bits ^ (noise & (bases ^ self._bases))
        return np.where(self.mask, out, 0).astype(np.uint8)


@dataclass
class Decisions:
    """Per-qubit choices: measure in ``measure_bases`` where ``measure_mask``,
    keep where ``store_mask``, discard the rest."""

    measure_bases: np.ndarray
    measure_mask: np.ndarray
    store_mask: np.ndarray

    @classmethod
    def measure_all(cls, shape, bases) -> Decisions:
        b = np.broadcast_to(np.asarray(bases, dtype=np.uint8), shape).copy()
        return cls(b, np.ones(shape, dtype=bool), np.zeros(shape, dtype=bool))

    @classmethod
    def discard_all(cls, shape) -> Decisions:
        return cls(np.zeros(shape, dtype=np.uint8), np.zeros(shape, dtype=bool), np.zeros(shape, dtype=bool))


class MemoryLedger:
    """Quantum-memory accounting for one party, in qubit units.

    ``stored`` is the current holding; ``peak`` the maximum seen.  At a
    bound the holding must not exceed ``budget``; violations are recorded
    and, when ``enforce`` is set, raised.
    """

    def __init__(self, owner: str, budget: int, enforce: bool = True, transcript: Transcript | None = None):
        self.owner, self.budget, self.enforce = owner, budget, enforce
        self.stored = 0
        self.peak = 0
        self.violations: list[dict] = []
        self.transcript = transcript

    def hold(self, k: int) -> None:
        self.stored += int(k)
        self.peak = max(self.peak, self.stored)

    def release(self, k: int) -> None:
        if k > self.stored:
            raise ValueError("releasing more than held")
        self.stored -= int(k)

    def check(self, held: int | None = None, where: str = "bound") -> bool:
        held = self.stored if held is None else int(held)
        self.peak = max(self.peak, held)
        if held <= self.budget:
            return True
        rec = {"owner": self.owner, "stored": held, "budget": self.budget, "at": where}
        self.violations.append(rec)
        if self.transcript is not None:
            self.transcript.emit("ledger_violation", **rec)
        if self.enforce:
            raise LedgerViolation(self.owner, held, self.budget)
        return False

    @property
    def ok(self) -> bool:
        return not self.violations


def apply_bound(ledger: MemoryLedger, stored_per_run, transcript: Transcript | None = None) -> int:
    """Memory bound event: every run's stored count must fit the budget.

    Returns the number of violating runs (also recorded in the ledger).
    """
    counts = np.atleast_1d(np.asarray(stored_per_run))
    worst = int(counts.max()) if counts.size else 0
    bad = int((counts > ledger.budget).sum())
    if transcript is not None:
        transcript.emit("bound_apply", owner=ledger.owner, stored=worst, budget=ledger.budget, runs=int(counts.size))
    ledger.peak = max(ledger.peak, worst)
    if bad:
        ledger.check(worst)
        # check() logs one record; count the rest without re-raising
        for _ in range(bad - 1):
            ledger.violations.append({"owner": ledger.owner, "stored": worst, "budget": ledger.budget, "at": "bound"})
    return bad


@dataclass
class Outcome:
    bits: np.ndarray          # measured results, 0 where not measured
    bases: np.ndarray         # bases used where measured
    measured: np.ndarray      # bool mask
    stored: StoredQubits | None
    violations: int = 0


def send(msg: QuantumMessage, transcript: Transcript | None = None) -> None:
    if transcript is not None:
        transcript.emit("qubit_send", runs=msg.runs, width=msg.width,
                        markers=list(msg.bound_markers), digest=msg.digest())


def transmit(msg: QuantumMessage, receiver, ledger: MemoryLedger, gen: np.random.Generator,
             transcript: Transcript | None = None, info: dict | None = None) -> Outcome:
    """Deliver ``msg`` to a strategy and apply its bound events.

    ``receiver.decide(shape, info, gen)`` returns ``Decisions``.
    """
    if msg.delivered:
        raise ConsumedError()
    msg.delivered = True
    shape = msg.shape
    d = receiver.decide(shape, dict(info or {}), gen)
    for arr in (d.measure_bases, d.measure_mask, d.store_mask):
        if np.shape(arr) != shape:
            raise ShapeError(f"decision shape {np.shape(arr)} != message shape {shape}")
    mmask = np.asarray(d.measure_mask, dtype=bool)
    smask = np.asarray(d.store_mask, dtype=bool)
    if np.any(mmask & smask):
        raise ShapeError("a qubit cannot be both measured and stored")
    bases = np.asarray(d.measure_bases, dtype=np.uint8)
    noise = gen.integers(0, 2, size=shape, dtype=np.uint8)
    raw = msg._bits ^ (noise & (bases ^ msg._bases))
    bits = np.where(mmask, raw, 0).astype(np.uint8)
    if transcript is not None:
        transcript.emit("measure", count=int(mmask.sum()))
    stored = StoredQubits(msg._bits, msg._bases, smask) if smask.any() else None
    violations = 0
    for p in msg.bound_markers:
        per_run = smask[:, :p].sum(axis=1)
        violations += apply_bound(ledger, per_run, transcript)
    msg.bound_applied = True
    return Outcome(bits, np.where(mmask, bases, 0).astype(np.uint8), mmask, stored, violations)


class HonestMeasure:
    """Measures every qubit in fixed or per-qubit bases and stores nothing."""

    def __init__(self, bases):
        self.bases = bases

    def decide(self, shape, info, gen) -> Decisions:
        return Decisions.measure_all(shape, self.bases)


class RandomBasis:
    def decide(self, shape, info, gen) -> Decisions:
        return Decisions.measure_all(shape, gen.integers(0, 2, size=shape, dtype=np.uint8))


class StoreFirst:
    """Stores the first ``k`` qubits of each run and measures the rest in ``basis``."""

    def __init__(self, k: int, basis: int = PLUS):
        self.k, self.basis = k, basis

    def decide(self, shape, info, gen) -> Decisions:
        store = np.zeros(shape, dtype=bool)
        store[:, : self.k] = True
        return Decisions(np.full(shape, self.basis, dtype=np.uint8), ~store, store)
