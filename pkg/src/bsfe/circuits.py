"""Boolean circuits over {AND, XOR, NOT, CONST0, CONST1}.

Wire numbering: wires ``0 .. n_inputs-1`` are the inputs, wire
``n_inputs + i`` is the output of gate ``i``.  Gates are stored in
topological order, so every gate reads only lower-numbered wires.

Text format, one statement per line::

    in 2
    g0 = AND in0 in1
    out g0

Fixed-length encoding (little-endian fields, zero padded to ``w``)::

    n_inputs:16 | n_gates:16 | n_outputs:16 | out_ref:16 * n_outputs |
    (op:3, a:16, b:16) * n_gates

A ref ``j < n_inputs`` names input ``j``; otherwise gate ``j - n_inputs``.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .algebra import BitVector
from .errors import ClassBoundExceeded, CircuitStructureError, CircuitSyntaxError, ShapeError

AND, XOR, NOT, CONST0, CONST1 = 0, 1, 2, 3, 4
OP_NAMES = ("AND", "XOR", "NOT", "CONST0", "CONST1")
OP_CODES = {name: i for i, name in enumerate(OP_NAMES)}
ARITY = (2, 2, 1, 0, 0)

FIELD_BITS = 16
OP_BITS = 3
GATE_BITS = OP_BITS + 2 * FIELD_BITS
HEADER_BITS = 3 * FIELD_BITS
MAX_REF = (1 << FIELD_BITS) - 1


class Gate(NamedTuple):
    op: int
    a: int = 0
    b: int = 0


@dataclass(frozen=True)
class BooleanCircuit:
    n_inputs: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(Gate(*g) for g in self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if self.n_inputs < 0:
            raise CircuitStructureError("negative input count")
        for i, g in enumerate(self.gates):
            if not 0 <= g.op < len(OP_NAMES):
                raise CircuitStructureError(f"gate {i}: unknown op {g.op}")
            limit = self.n_inputs + i
            used = (g.a, g.b)[: ARITY[g.op]]
            if any(not 0 <= w < limit for w in used):
                raise CircuitStructureError(f"gate {i} reads an undefined or later wire")
            if any(w for w in (g.a, g.b)[ARITY[g.op]:]):
                raise CircuitStructureError(f"gate {i}: unused operand must be 0")
        for o in self.outputs:
            if not 0 <= o < self.n_wires:
                raise CircuitStructureError(f"output wire {o} undefined")

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def n_gates(self) -> int:
        return len(self.gates)

    @property
    def n_wires(self) -> int:
        return self.n_inputs + len(self.gates)

    @cached_property
    def arrays(self):
        """(ops uint8, in_a int32, in_b int32) for the garbling kernels."""
        ops = np.fromiter((g.op for g in self.gates), dtype=np.uint8, count=len(self.gates))
        a = np.fromiter((g.a for g in self.gates), dtype=np.int32, count=len(self.gates))
        b = np.fromiter((g.b for g in self.gates), dtype=np.int32, count=len(self.gates))
        return ops, a, b

    def wire_name(self, w: int) -> str:
        return f"in{w}" if w < self.n_inputs else f"g{w - self.n_inputs}"

    def __call__(self, x: BitVector) -> BitVector:
        return eval_circuit(self, x)


# -- parsing ---------------------------------------------------------------

_WIRE = re.compile(r"(in|g)(\d+)$")


def _wire_token(tok, lineno):
    m = _WIRE.match(tok)
    if not m:
        raise CircuitSyntaxError(lineno, f"bad wire name {tok!r}")
    return m.group(1), int(m.group(2))


def parse_circuit(text: str | Iterable[str]) -> BooleanCircuit:
    """Parse the line-oriented text format.

    Gate definitions may appear in any order; they are sorted
    topologically and renumbered only when the text is out of order.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    n_inputs = None
    defs: dict[int, tuple[int, list, int]] = {}
    outs: list = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "in":
            if len(toks) != 2 or not toks[1].isdigit():
                raise CircuitSyntaxError(lineno, "expected 'in <k>'")
            if n_inputs is not None:
                raise CircuitSyntaxError(lineno, "duplicate 'in' statement")
            n_inputs = int(toks[1])
        elif toks[0] == "out":
            if len(toks) < 2:
                raise CircuitSyntaxError(lineno, "'out' needs at least one wire")
            outs.extend((_wire_token(t, lineno), lineno) for t in toks[1:])
        elif len(toks) >= 3 and toks[1] == "=":
            kind, idx = _wire_token(toks[0], lineno)
            if kind != "g":
                raise CircuitSyntaxError(lineno, "only gates can be assigned")
            if idx in defs:
                raise CircuitSyntaxError(lineno, f"g{idx} defined twice")
            op = OP_CODES.get(toks[2])
            if op is None:
                raise CircuitSyntaxError(lineno, f"unknown op {toks[2]!r}")
            args = [_wire_token(t, lineno) for t in toks[3:]]
            if len(args) != ARITY[op]:
                raise CircuitSyntaxError(lineno, f"{toks[2]} takes {ARITY[op]} operands")
            defs[idx] = (op, args, lineno)
        else:
            raise CircuitSyntaxError(lineno, f"unrecognised statement {line!r}")
    if n_inputs is None:
        raise CircuitSyntaxError(len(lines) or 1, "missing 'in' statement")

    def check(ref, lineno):
        kind, idx = ref
        if kind == "in" and idx >= n_inputs:
            raise CircuitStructureError(f"line {lineno}: undefined wire in{idx}")
        if kind == "g" and idx not in defs:
            raise CircuitStructureError(f"line {lineno}: undefined wire g{idx}")

    for op, args, lineno in defs.values():
        for ref in args:
            check(ref, lineno)
    for ref, lineno in outs:
        check(ref, lineno)

    # Kahn's algorithm, preferring the smallest pending name so that
    # already-ordered text keeps its numbering.
    deps = {g: {i for k, i in args if k == "g"} for g, (_, args, _) in defs.items()}
    users: dict[int, list[int]] = {g: [] for g in defs}
    for g, ds in deps.items():
        for d in ds:
            users[d].append(g)
    pending = {g: len(ds) for g, ds in deps.items()}
    heap = [g for g, c in pending.items() if c == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        g = heapq.heappop(heap)
        order.append(g)
        for u in users[g]:
            pending[u] -= 1
            if pending[u] == 0:
                heapq.heappush(heap, u)
    if len(order) != len(defs):
        stuck = sorted(g for g, c in pending.items() if c)
        raise CircuitStructureError(f"cycle through g{stuck[0]}")
    pos = {g: i for i, g in enumerate(order)}

    def ref(r):
        kind, idx = r
        return idx if kind == "in" else n_inputs + pos[idx]

    gates = []
    for g in order:
        op, args, _ = defs[g]
        wires = [ref(a) for a in args] + [0, 0]
        gates.append(Gate(op, wires[0], wires[1]))
    return BooleanCircuit(n_inputs, tuple(gates), tuple(ref(r) for r, _ in outs))


def emit_circuit(C: BooleanCircuit) -> str:
    lines = [f"in {C.n_inputs}"]
    for i, g in enumerate(C.gates):
        operands = " ".join(C.wire_name(w) for w in (g.a, g.b)[: ARITY[g.op]])
        lines.append(f"g{i} = {OP_NAMES[g.op]}" + (f" {operands}" if operands else ""))
    if C.outputs:
        lines.append("out " + " ".join(C.wire_name(w) for w in C.outputs))
    return "\n".join(lines) + "\n"


# -- evaluation ------------------------------------------------------------

def eval_circuit(C: BooleanCircuit, x: BitVector) -> BitVector:
    if x.length != C.n_inputs:
        raise ShapeError(f"circuit takes {C.n_inputs} inputs, got {x.length}")
    vals = list(x)
    for g in C.gates:
        op = g.op
        if op == AND:
            vals.append(vals[g.a] & vals[g.b])
        elif op == XOR:
            vals.append(vals[g.a] ^ vals[g.b])
        elif op == NOT:
            vals.append(vals[g.a] ^ 1)
        else:
            vals.append(op - CONST0)
    return BitVector.from_bits(vals[o] for o in C.outputs)


def eval_bitsliced(C: BooleanCircuit, inputs: Sequence[int], lanes: int) -> list[int]:
    """Evaluate ``lanes`` inputs at once; bit t of ``inputs[i]`` is input i of lane t."""
    if len(inputs) != C.n_inputs:
        raise ShapeError(f"circuit takes {C.n_inputs} inputs, got {len(inputs)}")
    ones = (1 << lanes) - 1
    vals = list(inputs)
    for g in C.gates:
        op = g.op
        if op == AND:
            vals.append(vals[g.a] & vals[g.b])
        elif op == XOR:
            vals.append(vals[g.a] ^ vals[g.b])
        elif op == NOT:
            vals.append(vals[g.a] ^ ones)
        else:
            vals.append(ones if op == CONST1 else 0)
    return [vals[o] for o in C.outputs]


def truth_table(C: BooleanCircuit) -> list[int]:
    """Output word (bit j = output j) for every input 0 .. 2^n - 1."""
    n = C.n_inputs
    lanes = 1 << n
    cols = []
    for i in range(n):
        # lane t has input i = bit i of t
        period = 1 << i
        block = ((1 << period) - 1) << period
        word = 0
        for start in range(0, lanes, 2 * period):
            word |= block << start
        cols.append(word)
    outs = eval_bitsliced(C, cols, lanes)
    return [sum(((o >> t) & 1) << j for j, o in enumerate(outs)) for t in range(lanes)]


# -- fixed-length encoding -------------------------------------------------

def encoding_length(n_gates: int, n_outputs: int) -> int:
    return HEADER_BITS + FIELD_BITS * n_outputs + GATE_BITS * n_gates


@dataclass(frozen=True)
class CircuitEncoding:
    bits: BitVector

    @property
    def w(self) -> int:
        return self.bits.length


def encode_circuit(C: BooleanCircuit, w: int) -> CircuitEncoding:
    need = encoding_length(C.n_gates, C.n_outputs)
    if need > w:
        raise ClassBoundExceeded(f"needs {need} bits, class allows {w}")
    if max(C.n_inputs, C.n_gates, C.n_outputs, C.n_wires - 1) > MAX_REF:
        raise ClassBoundExceeded("wire count exceeds 16-bit fields")
    value, pos = 0, 0

    def put(v, width):
        nonlocal value, pos
        value |= v << pos
        pos += width

    put(C.n_inputs, FIELD_BITS)
    put(C.n_gates, FIELD_BITS)
    put(C.n_outputs, FIELD_BITS)
    for o in C.outputs:
        put(o, FIELD_BITS)
    for g in C.gates:
        put(g.op, OP_BITS)
        put(g.a, FIELD_BITS)
        put(g.b, FIELD_BITS)
    return CircuitEncoding(BitVector(value, w))


def decode_circuit(e: CircuitEncoding | BitVector) -> BooleanCircuit:
    bits = e.bits if isinstance(e, CircuitEncoding) else e
    value, w = bits.value, bits.length
    pos = 0

    def take(width):
        nonlocal pos
        if pos + width > w:
            raise CircuitStructureError("encoding truncated")
        v = (value >> pos) & ((1 << width) - 1)
        pos += width
        return v

    n_inputs, n_gates, n_outputs = take(FIELD_BITS), take(FIELD_BITS), take(FIELD_BITS)
    outputs = [take(FIELD_BITS) for _ in range(n_outputs)]
    gates = [Gate(take(OP_BITS), take(FIELD_BITS), take(FIELD_BITS)) for _ in range(n_gates)]
    if value >> pos:
        raise CircuitStructureError("nonzero padding")
    return BooleanCircuit(n_inputs, tuple(gates), tuple(outputs))


def split_outputs(C: BooleanCircuit) -> list[BooleanCircuit]:
    """One single-output circuit per output wire (dead gates pruned)."""
    parts = []
    for o in C.outputs:
        live = set()
        stack = [o]
        while stack:
            w = stack.pop()
            if w < C.n_inputs or w in live:
                continue
            live.add(w)
            g = C.gates[w - C.n_inputs]
            stack.extend((g.a, g.b)[: ARITY[g.op]])
        keep = sorted(live)
        remap = {i: i for i in range(C.n_inputs)}
        gates = []
        for w in keep:
            g = C.gates[w - C.n_inputs]
            args = [remap[v] for v in (g.a, g.b)[: ARITY[g.op]]] + [0, 0]
            remap[w] = C.n_inputs + len(gates)
            gates.append(Gate(g.op, args[0], args[1]))
        parts.append(BooleanCircuit(C.n_inputs, tuple(gates), (remap[o],)))
    return parts


# -- fixtures --------------------------------------------------------------

FIXTURE_NAMES = (
    "and", "xor", "or", "not", "passthrough", "const", "mux",
    "majority", "parity4", "adder2", "eq2", "and4",
)


@lru_cache(maxsize=None)
def load_fixture(name: str) -> BooleanCircuit:
    text = resources.files("bsfe").joinpath("data", f"{name}.circ").read_text()
    return parse_circuit(text)


def fixtures() -> dict[str, BooleanCircuit]:
    return {name: load_fixture(name) for name in FIXTURE_NAMES}
