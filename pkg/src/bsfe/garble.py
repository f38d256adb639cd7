"""Yao garbling with point-and-permute.

Each binary gate gets four rows indexed by the select bits (low bit) of
its input labels.  A row is ``PRF_{A,B,gate}(j) xor (label || 0^tag)``;
decryption succeeds only when the tag bits come out zero.  NOT gates swap
the label pair and need no table; constant gates publish one label.
The PRF is SipHash-2-4 under a fresh public key per garbling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import BitVector
from .circuits import ARITY, AND, CONST0, NOT, XOR, BooleanCircuit
from .errors import InvalidLabels, ShapeError
from .rng import np_generator

DEFAULT_LABEL_BITS = 128
DEFAULT_TAG_BITS = 32
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class WireLabel:
    label: int
    bits: int

    @property
    def select_bit(self) -> int:
        return self.label & 1

    def words(self) -> tuple[int, int]:
        return self.label & _MASK64, self.label >> 64


@dataclass(frozen=True)
class Topology:
    """Wiring plus gate kind; AND and XOR are indistinguishable here."""

    n_inputs: int
    kinds: tuple[int, ...]          # 0 binary, 1 NOT, 2 constant
    in_a: tuple[int, ...]
    in_b: tuple[int, ...]
    outputs: tuple[int, ...]


def topology(C: BooleanCircuit) -> Topology:
    top = C.__dict__.get("_topology")
    if top is None:
        kind = (0, 0, 1, 2, 2)
        top = Topology(C.n_inputs, tuple(kind[g.op] for g in C.gates),
                       tuple(g.a for g in C.gates), tuple(g.b for g in C.gates), C.outputs)
        C.__dict__["_topology"] = top  # frozen dataclass: cache outside __setattr__
    return top


@dataclass(frozen=True)
class GarbledCircuit:
    top: Topology
    ops: np.ndarray           # uint8 gate kinds; binary gates all read as AND
    tables: np.ndarray        # (n_gates, 4, words) uint64
    const_labels: np.ndarray  # (n_gates, 2) uint64
    decode: tuple[dict, ...]  # per output: label int -> bit
    label_bits: int
    tag_bits: int
    prf_key: tuple[int, int]
    in_a: np.ndarray
    in_b: np.ndarray

    @property
    def n_inputs(self) -> int:
        return self.top.n_inputs

    def size_bits(self) -> int:
        """Bits of table material an evaluator receives."""
        _, masks = kernels.row_layout(self.label_bits, self.tag_bits)
        width = sum(m.bit_length() for m in masks)
        binary = sum(1 for k in self.top.kinds if k == 0)
        consts = sum(1 for k in self.top.kinds if k == 2)
        return 4 * width * binary + self.label_bits * consts


@dataclass(frozen=True)
class GarbleKey:
    labels: np.ndarray  # (n_inputs, 2, 2) uint64
    label_bits: int

    def pair(self, i: int) -> tuple[WireLabel, WireLabel]:
        return ginput(self, i, 0), ginput(self, i, 1)


def _label_int(row) -> int:
    return int(row[0]) | (int(row[1]) << 64)


def _random_words(gen, shape, bits):
    w = gen.integers(0, np.iinfo(np.uint64).max, size=shape, dtype=np.uint64, endpoint=True)
    return w if bits >= 64 else w & np.uint64((1 << bits) - 1)


def _fresh_labels(n_wires, label_bits, gen):
    lab = np.zeros((n_wires, 2, 2), dtype=np.uint64)
    lo = _random_words(gen, (n_wires, 2), min(label_bits, 64))
    # opposite select bits within a wire
    lo[:, 1] = (lo[:, 1] & ~np.uint64(1)) | ((lo[:, 0] & np.uint64(1)) ^ np.uint64(1))
    lab[:, :, 0] = lo
    if label_bits > 64:
        lab[:, :, 1] = _random_words(gen, (n_wires, 2), label_bits - 64)
    return lab


def gcircuit(C: BooleanCircuit, rng, label_bits: int = DEFAULT_LABEL_BITS,
             tag_bits: int = DEFAULT_TAG_BITS) -> tuple[GarbledCircuit, GarbleKey]:
    gen = np_generator(rng)
    k0, k1 = (int(w) for w in _random_words(gen, 2, 64))
    ops, a, b = C.arrays
    labels = _fresh_labels(C.n_wires, label_bits, gen)
    tables = kernels.garble_tables(ops, a, b, C.n_inputs, labels, label_bits, tag_bits, k0, k1)
    # the evaluator only learns gate kinds
    eval_ops = np.where(ops == XOR, np.uint8(AND), ops)
    const_labels = np.zeros((C.n_gates, 2), dtype=np.uint64)
    is_const = ops >= CONST0
    if is_const.any():
        gi = np.nonzero(is_const)[0]
        const_labels[gi] = labels[C.n_inputs + gi, (ops[gi] - CONST0).astype(np.intp)]
    decode = tuple({_label_int(labels[o, v]): v for v in (0, 1)} for o in C.outputs)
    gc = GarbledCircuit(topology(C), eval_ops, tables, const_labels, decode,
                        label_bits, tag_bits, (k0, k1), a, b)
    return gc, GarbleKey(labels[: C.n_inputs].copy(), label_bits)


def ginput(key: GarbleKey, i: int, b: int) -> WireLabel:
    if not 0 <= i < key.labels.shape[0]:
        raise IndexError(f"input {i} out of range")
    return WireLabel(_label_int(key.labels[i, b]), key.label_bits)


def geval(gc: GarbledCircuit, labels) -> BitVector:
    """Evaluate on one label per input; raises InvalidLabels on a bad row."""
    labels = list(labels)
    if len(labels) != gc.n_inputs:
        raise ShapeError(f"need {gc.n_inputs} labels, got {len(labels)}")
    n_wires = gc.n_inputs + len(gc.ops)
    active = np.zeros((n_wires, 2), dtype=np.uint64)
    limit = 1 << gc.label_bits
    for i, lab in enumerate(labels):
        v = lab.label if isinstance(lab, WireLabel) else int(lab)
        if not 0 <= v < limit:
            raise InvalidLabels()
        active[i, 0] = v & _MASK64
        active[i, 1] = v >> 64
    try:
        kernels.eval_garbled(gc.ops, gc.in_a, gc.in_b, gc.n_inputs, gc.tables,
                             gc.const_labels, active, gc.label_bits, gc.tag_bits, *gc.prf_key)
    except ValueError:
        raise InvalidLabels() from None
    out = 0
    for j, o in enumerate(gc.top.outputs):
        bit = gc.decode[j].get(_label_int(active[o]))
        if bit is None:
            raise InvalidLabels()
        out |= bit << j
    return BitVector(out, len(gc.top.outputs))


def gsimulate(x: BitVector, y: BitVector, top: Topology, rng,
              label_bits: int = DEFAULT_LABEL_BITS, tag_bits: int = DEFAULT_TAG_BITS):
    """Garbled circuit and input labels for ``top`` that decode to ``y``.

    Built from the topology alone: binary gates are garbled as XOR, the
    circuit is run on the all-zero input, and the output decode map is
    programmed so the active labels read as ``y``.  ``x`` only fixes the
    input length.
    """
    if x.length != top.n_inputs or y.length != len(top.outputs):
        raise ShapeError("x or y does not match the topology")
    ops = [XOR if k == 0 else (NOT if k == 1 else CONST0) for k in top.kinds]
    from .circuits import Gate

    stand_in = BooleanCircuit(top.n_inputs,
                              tuple(Gate(op, a if ARITY[op] > 0 else 0, b if ARITY[op] > 1 else 0)
                                    for op, a, b in zip(ops, top.in_a, top.in_b)),
                              top.outputs)
    gc, key = gcircuit(stand_in, rng, label_bits, tag_bits)
    labels = [ginput(key, i, 0) for i in range(top.n_inputs)]
    n_wires = top.n_inputs + len(ops)
    active = np.zeros((n_wires, 2), dtype=np.uint64)
    for i, lab in enumerate(labels):
        active[i] = lab.words()
    kernels.eval_garbled(gc.ops, stand_in.arrays[1], stand_in.arrays[2], top.n_inputs, gc.tables, gc.const_labels,
                         active, label_bits, tag_bits, *gc.prf_key)
    decode = []
    for j, o in enumerate(top.outputs):
        live = _label_int(active[o])
        other = next(k for k in gc.decode[j] if k != live)
        decode.append({live: y[j], other: y[j] ^ 1})
    sim = GarbledCircuit(top, gc.ops, gc.tables, gc.const_labels, tuple(decode),
                         label_bits, tag_bits, gc.prf_key, gc.in_a, gc.in_b)
    return labels, sim
