"""1-out-of-2 oblivious transfer over the bounded-quantum-storage channel.

The sender prepares m BB84 qubits with random bits x and bases theta.
After the memory bound it announces theta, two Toeplitz hashes f0, f1 and
``e_b = f_b(x restricted to I_b) xor s_b`` where ``I_b`` is the set of
positions prepared in basis b.  A receiver with choice c measures
everything in basis c and outputs ``e_c xor f_c(x'|I_c)``.

The core works on batches: T independent executions as (T, m) arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import BitVector, ToeplitzHash
from .channel import Decisions, MemoryLedger, QuantumMessage, send, transmit
from .errors import InsecureParameters, ScheduleError, ShapeError
from .rng import np_generator
from .transcript import Transcript


def required_qubits(ell: int, s: int) -> int:
    return 16 * ell + 8 * s


def params_ok(m: int, ell: int, s: int) -> bool:
    """m/4 - 2*ell - s >= m/8, i.e. m >= 16*ell + 8*s."""
    return m - 16 * ell - 8 * s >= 0


def check_params(m: int, ell: int, s: int) -> None:
    if ell < 1 or m < 1 or s < 0:
        raise InsecureParameters(f"m={m}, l={ell}, s={s}")
    if not params_ok(m, ell, s):
        raise InsecureParameters(f"m={m} < 16*{ell} + 8*{s} = {required_qubits(ell, s)}")


# -- vectorized core -------------------------------------------------------

def toeplitz_masked(x: np.ndarray, mask: np.ndarray, seeds: np.ndarray, ell: int) -> np.ndarray:
    """Row-wise Toeplitz hash of the bits of ``x`` selected by ``mask``.

    Row t hashes the compressed vector x[t, mask[t]] with seed prefix
    seeds[t, : count + ell - 1].  Returns (T, ell) uint8 bits.
    """
    T, m = x.shape
    if seeds.shape != (T, m + ell - 1):
        raise ShapeError(f"seed array {seeds.shape} != {(T, m + ell - 1)}")
    return kernels.toeplitz_rows(x, mask.astype(np.uint8), seeds, ell)


def pack_rows(bits: np.ndarray) -> list[int]:
    """(T, k) bit rows -> little-endian ints."""
    T, k = bits.shape
    padded = np.zeros((T, (k + 7) // 8 * 8), dtype=np.uint8)
    padded[:, :k] = bits
    by = np.packbits(padded, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in by]


def unpack_rows(values, k: int) -> np.ndarray:
    nb = (k + 7) // 8
    raw = np.frombuffer(b"".join(int(v).to_bytes(nb, "little") for v in values), dtype=np.uint8)
    return np.unpackbits(raw.reshape(len(values), nb), axis=1, bitorder="little")[:, :k].copy()


@dataclass
class BatchAnnouncement:
    theta: np.ndarray     # (T, m)
    seeds0: np.ndarray    # (T, m + ell - 1); row t uses a prefix
    seeds1: np.ndarray
    e0: np.ndarray        # (T, ell)
    e1: np.ndarray
    ell: int

    def seeds(self, b: int) -> np.ndarray:
        return self.seeds1 if b else self.seeds0

    def e(self, b: int) -> np.ndarray:
        return self.e1 if b else self.e0

    def hash(self, t: int, b: int) -> ToeplitzHash:
        """Run t's f_b as a ToeplitzHash over exactly |I_b| input bits."""
        n_in = int((self.theta[t] == b).sum())
        seed = self.seeds(b)[t, : n_in + self.ell - 1]
        return ToeplitzHash(BitVector(pack_rows(seed[None, :])[0], seed.size), n_in, self.ell)


class DeferredAnnouncement:
    """Classical follow-up that may only be opened once the bound has fired."""

    def __init__(self, msg: QuantumMessage, ann: BatchAnnouncement, transcript: Transcript | None):
        self._msg, self._ann, self._tr = msg, ann, transcript
        self.opened = False

    def reveal(self) -> BatchAnnouncement:
        if not self._msg.bound_applied:
            raise ScheduleError("announcement before the memory bound")
        if not self.opened and self._tr is not None:
            a = self._ann
            self._tr.emit("ot_announce", runs=a.theta.shape[0],
                          theta=[r for r in a.theta] if a.theta.shape[0] == 1 else None,
                          e0=pack_rows(a.e0), e1=pack_rows(a.e1),
                          digest=_ann_digest(a))
        self.opened = True
        return self._ann


def _ann_digest(a: BatchAnnouncement) -> str:
    import hashlib

    h = hashlib.blake2b(digest_size=16)
    for arr in (a.theta, a.seeds0, a.seeds1, a.e0, a.e1):
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()


def send_batch(s0: np.ndarray, s1: np.ndarray, m: int, gen: np.random.Generator,
               transcript: Transcript | None = None, bound_markers=None, blocks: int = 1):
    """Prepare T executions.  ``s0``/``s1`` are (T, ell) bit arrays.

    With ``blocks > 1`` consecutive groups of ``blocks`` executions travel as
    one run (one row of the quantum message) sharing its bound markers.
    """
    T, ell = s0.shape
    if s1.shape != s0.shape:
        raise ShapeError("s0 and s1 differ in shape")
    if T % blocks:
        raise ShapeError("executions must divide into runs")
    x = gen.integers(0, 2, size=(T, m), dtype=np.uint8)
    theta = gen.integers(0, 2, size=(T, m), dtype=np.uint8)
    msg = QuantumMessage(x.reshape(T // blocks, blocks * m), theta.reshape(T // blocks, blocks * m),
                         bound_markers)
    send(msg, transcript)
    seeds0 = gen.integers(0, 2, size=(T, m + ell - 1), dtype=np.uint8)
    seeds1 = gen.integers(0, 2, size=(T, m + ell - 1), dtype=np.uint8)
    e0 = toeplitz_masked(x, theta == 0, seeds0, ell) ^ s0
    e1 = toeplitz_masked(x, theta == 1, seeds1, ell) ^ s1
    ann = BatchAnnouncement(theta, seeds0, seeds1, e0, e1, ell)
    return msg, DeferredAnnouncement(msg, ann, transcript)


def decode_batch(choice, bits: np.ndarray, ann: BatchAnnouncement) -> np.ndarray:
    """Honest output e_c xor f_c(x'|I_c) for measured bits (T, m)."""
    T = bits.shape[0]
    c = np.broadcast_to(np.asarray(choice, dtype=np.uint8), (T,))
    mask = ann.theta == c[:, None]
    h0 = toeplitz_masked(bits, mask, np.where(c[:, None] == 1, ann.seeds1, ann.seeds0), ann.ell)
    return h0 ^ np.where(c[:, None] == 1, ann.e1, ann.e0)


class ChoiceReceiver:
    """Honest receiver: basis c for every qubit of an execution, nothing stored."""

    def __init__(self, choices: np.ndarray, m: int):
        self.choices = np.asarray(choices, dtype=np.uint8)
        self.m = m

    def decide(self, shape, info, gen) -> Decisions:
        per_qubit = np.repeat(self.choices, self.m).reshape(shape)
        return Decisions.measure_all(shape, per_qubit)


# -- single-execution API --------------------------------------------------

@dataclass(frozen=True)
class OtSenderInput:
    s0: BitVector
    s1: BitVector
    m: int
    ell: int
    s: int = 0

    def __post_init__(self):
        if self.s0.length != self.ell or self.s1.length != self.ell:
            raise ShapeError("strings must have length ell")


@dataclass(frozen=True)
class OtAnnouncement:
    theta: BitVector
    f0: ToeplitzHash
    f1: ToeplitzHash
    e0: BitVector
    e1: BitVector


def announcement_of(batch: BatchAnnouncement, t: int = 0) -> OtAnnouncement:
    theta = batch.theta[t]
    return OtAnnouncement(
        BitVector(pack_rows(theta[None, :])[0], theta.size),
        batch.hash(t, 0), batch.hash(t, 1),
        BitVector(pack_rows(batch.e0[t : t + 1])[0], batch.ell),
        BitVector(pack_rows(batch.e1[t : t + 1])[0], batch.ell),
    )


def ot_send(inp: OtSenderInput, rng, transcript: Transcript | None = None):
    """(message, deferred announcement) for one execution."""
    check_params(inp.m, inp.ell, inp.s)
    gen = np_generator(rng)
    s0 = unpack_rows([inp.s0.value], inp.ell)
    s1 = unpack_rows([inp.s1.value], inp.ell)
    return send_batch(s0, s1, inp.m, gen, transcript)


def ot_receive(c: int, msg: QuantumMessage, ann: DeferredAnnouncement, rng,
               ledger: MemoryLedger | None = None, transcript: Transcript | None = None) -> BitVector:
    if c not in (0, 1):
        raise ValueError("choice bit must be 0 or 1")
    ledger = ledger or MemoryLedger("receiver", 0)
    gen = np_generator(rng)
    out = transmit(msg, ChoiceReceiver(np.array([c]), msg.width), ledger, gen, transcript)
    a = ann.reveal()
    y = decode_batch(c, out.bits, a)
    return BitVector(pack_rows(y)[0], a.ell)
