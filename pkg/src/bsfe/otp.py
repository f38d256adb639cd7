"""One-time programs.

``otp_yao_*``: a garbled circuit whose evaluator-input labels are each
delivered through one oblivious transfer.  All OT blocks travel as one
run with a single memory bound at the end, and labels are ``ell`` bits.

``kil_*``: an ideal single-evaluation functionality with a closing
window, for schemes that only need the one-time contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ot
from .algebra import BitVector
from .channel import MemoryLedger, QuantumMessage, transmit
from .circuits import BooleanCircuit, eval_circuit
from .errors import BudgetExhausted, Expired, ShapeError
from .garble import DEFAULT_TAG_BITS, GarbledCircuit, WireLabel, gcircuit, geval
from .rng import np_generator
from .transcript import Transcript


@dataclass
class OtpTransmission:
    """Qubits for every evaluator input, then the garbled circuit and
    the per-input (theta, f0, f1, e0, e1) announcements."""

    message: QuantumMessage
    garbled: GarbledCircuit
    announcement: ot.DeferredAnnouncement
    fixed_labels: tuple[WireLabel, ...]
    n_free: int
    m: int
    ell: int
    s: int

    @property
    def qubit_count(self) -> int:
        return self.n_free * self.m

    @property
    def bound_markers(self) -> tuple[int, ...]:
        return self.message.bound_markers


def otp_yao_send(C: BooleanCircuit, s: int, ell: int, rng, fixed: BitVector | None = None,
                 transcript: Transcript | None = None, tag_bits: int = DEFAULT_TAG_BITS,
                 garbled=None) -> OtpTransmission:
    """Compile ``C`` into a one-time program.

    ``fixed`` assigns the trailing inputs of ``C`` on the sender's side;
    their labels travel in the clear.  ``garbled`` may carry a
    precomputed ``(GarbledCircuit, GarbleKey)`` pair for ``C``.
    """
    n_fixed = fixed.length if fixed is not None else 0
    n_free = C.n_inputs - n_fixed
    if n_free < 0:
        raise ShapeError("more fixed inputs than circuit inputs")
    m = ot.required_qubits(ell, s)
    gc, key = garbled if garbled is not None else gcircuit(C, rng, label_bits=ell, tag_bits=tag_bits)
    gen = np_generator(rng)
    lab = key.labels
    if ell > 64:
        lo0, hi0 = lab[:n_free, 0, 0], lab[:n_free, 0, 1]
        s0 = np.array([_bits_of(int(a) | int(b) << 64, ell) for a, b in zip(lo0, hi0)], dtype=np.uint8).reshape(n_free, ell)
        lo1, hi1 = lab[:n_free, 1, 0], lab[:n_free, 1, 1]
        s1 = np.array([_bits_of(int(a) | int(b) << 64, ell) for a, b in zip(lo1, hi1)], dtype=np.uint8).reshape(n_free, ell)
    else:
        shifts = np.arange(ell, dtype=np.uint64)
        s0 = ((lab[:n_free, 0, 0][:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
        s1 = ((lab[:n_free, 1, 0][:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    if n_free:
        msg, ann = ot.send_batch(s0, s1, m, gen, transcript, blocks=n_free)
    else:
        msg, ann = _empty_round(gen, transcript)
    fixed_labels = ()
    if n_fixed:
        fb = np.array(fixed.to_bits(), dtype=np.intp)
        chosen = lab[n_free + np.arange(n_fixed), fb]
        lo, hi = chosen[:, 0].tolist(), chosen[:, 1].tolist()
        fixed_labels = tuple(WireLabel(a | b << 64, ell) for a, b in zip(lo, hi))
    if transcript is not None:
        transcript.emit("otp_send", inputs=n_free, fixed=n_fixed, m=m, ell=ell, s=s,
                        qubits=n_free * m, gates=len(gc.ops), table_bits=gc.size_bits(),
                        markers=list(msg.bound_markers))
    return OtpTransmission(msg, gc, ann, fixed_labels, n_free, m, ell, s)


def _bits_of(v, k):
    return [(v >> i) & 1 for i in range(k)]


def _empty_round(gen, transcript):
    # a circuit with no evaluator inputs still gets its one bound event
    z = np.zeros((1, 1), dtype=np.uint8)
    return ot.send_batch(z, z, 1, gen, transcript)


def otp_yao_receive(t: OtpTransmission, x: BitVector, rng, ledger: MemoryLedger | None = None,
                    transcript: Transcript | None = None) -> BitVector:
    """Honest evaluation on ``x``; stores no qubits."""
    if x.length != t.n_free:
        raise ShapeError(f"program takes {t.n_free} inputs, got {x.length}")
    ledger = ledger or MemoryLedger("evaluator", 0)
    gen = np_generator(rng)
    choices = np.array(x.to_bits() or [0], dtype=np.uint8)
    per_run = t.m if t.n_free else 1
    out = transmit(t.message, ot.ChoiceReceiver(choices, per_run), ledger, gen, transcript)
    ann = t.announcement.reveal()
    labels = []
    if t.n_free:
        bits = out.bits.reshape(t.n_free, t.m)
        y = ot.decode_batch(choices, bits, ann)
        labels = [WireLabel(v, t.ell) for v in ot.pack_rows(y)]
    result = geval(t.garbled, labels + list(t.fixed_labels))
    if transcript is not None:
        transcript.emit("otp_eval", backend="yao", out=result)
    return result


# -- ideal one-time functionality ------------------------------------------

Program = BooleanCircuit | Callable[[BitVector], "BitVector | None"]


@dataclass
class KilHandle:
    program: Program
    remaining_evals: int = 1
    window_open: bool = True
    transcript: Transcript | None = field(default=None, repr=False)

    def close(self) -> None:
        self.window_open = False


def kil_create(program: Program, transcript: Transcript | None = None) -> KilHandle:
    if transcript is not None:
        transcript.emit("otp_send", backend="kil")
    return KilHandle(program, transcript=transcript)


def kil_eval(h: KilHandle, x: BitVector):
    if not h.window_open:
        raise Expired()
    if h.remaining_evals < 1:
        raise BudgetExhausted()
    h.remaining_evals -= 1
    p = h.program
    y = eval_circuit(p, x) if isinstance(p, BooleanCircuit) else p(x)
    if h.transcript is not None:
        h.transcript.emit("otp_eval", backend="kil", out=y)
    return y


def kil_close(h: KilHandle) -> None:
    h.close()

