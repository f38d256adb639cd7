"""Programmatic circuit construction with constant folding, plus the
generated circuits the schemes garble: the universal evaluator for a
fixed circuit class and GF(2^l) arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import circuits as cc
from .circuits import BooleanCircuit, Gate

ZERO, ONE = -1, -2


class CircuitBuilder:
    """Builds a BooleanCircuit gate by gate.

    Wires are ints; ``ZERO``/``ONE`` are folded constants.  Identical gates
    are shared and NOT pairs cancel.  ``build`` drops gates that no output
    depends on.
    """

    def __init__(self, n_inputs: int):
        self.n_inputs = n_inputs
        self.gates: list[Gate] = []
        self._memo: dict = {}
        self._neg: dict[int, int] = {}

    def inputs(self, start: int = 0, count: int | None = None) -> list[int]:
        stop = self.n_inputs if count is None else start + count
        return list(range(start, stop))

    def _gate(self, op, a=0, b=0):
        key = (op, a, b)
        w = self._memo.get(key)
        if w is None:
            w = self.n_inputs + len(self.gates)
            self.gates.append(Gate(op, a, b))
            self._memo[key] = w
        return w

    def NOT(self, a):
        if a == ZERO:
            return ONE
        if a == ONE:
            return ZERO
        if a in self._neg:
            return self._neg[a]
        w = self._gate(cc.NOT, a)
        self._neg[w] = a
        self._neg[a] = w
        return w

    def AND(self, a, b):
        if a == ZERO or b == ZERO:
            return ZERO
        if a == ONE:
            return b
        if b == ONE or a == b:
            return a
        if self._neg.get(a) == b:
            return ZERO
        if a > b:
            a, b = b, a
        return self._gate(cc.AND, a, b)

    def XOR(self, a, b):
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        if a == ONE:
            return self.NOT(b)
        if b == ONE:
            return self.NOT(a)
        if a == b:
            return ZERO
        if self._neg.get(a) == b:
            return ONE
        # x ^ ~y = ~(x ^ y): keep NOTs outermost so they cancel
        if a in self._neg and a > self._neg[a] and self.gates[a - self.n_inputs].op == cc.NOT:
            return self.NOT(self.XOR(self._neg[a], b))
        if b in self._neg and b > self._neg[b] and self.gates[b - self.n_inputs].op == cc.NOT:
            return self.NOT(self.XOR(a, self._neg[b]))
        if a > b:
            a, b = b, a
        return self._gate(cc.XOR, a, b)

    def OR(self, a, b):
        return self.NOT(self.AND(self.NOT(a), self.NOT(b)))

    def mux(self, s, x0, x1):
        """x0 if s == 0 else x1."""
        if x0 == x1:
            return x0
        if s == ZERO:
            return x0
        if s == ONE:
            return x1
        if x0 == ZERO:
            return self.AND(s, x1)
        if x1 == ZERO:
            return self.AND(self.NOT(s), x0)
        if x0 == ONE:
            return self.OR(self.NOT(s), x1)
        if x1 == ONE:
            return self.OR(s, x0)
        return self.XOR(x0, self.AND(s, self.XOR(x0, x1)))

    def mux_words(self, s, w0, w1):
        return [self.mux(s, a, b) for a, b in zip(w0, w1)]

    def select(self, index_bits, candidates, default=ZERO):
        """candidates[int(index_bits)], little-endian index; out of range -> default."""
        level = list(candidates)
        for s in index_bits:
            if len(level) <= 1:
                # every remaining high bit must be zero to stay in range
                if level:
                    level = [self.mux(s, level[0], default)]
                continue
            if len(level) % 2:
                level.append(default)
            level = [self.mux(s, level[i], level[i + 1]) for i in range(0, len(level), 2)]
        return level[0] if level else default

    def select_word(self, index_bits, words):
        width = len(words[0])
        return [self.select(index_bits, [w[j] for w in words]) for j in range(width)]

    def xor_words(self, a, b):
        return [self.XOR(x, y) for x, y in zip(a, b)]

    def and_all(self, bits):
        bits = list(bits)
        if not bits:
            return ONE
        while len(bits) > 1:
            nxt = [self.AND(bits[i], bits[i + 1]) for i in range(0, len(bits) - 1, 2)]
            if len(bits) % 2:
                nxt.append(bits[-1])
            bits = nxt
        return bits[0]

    def eq_words(self, a, b):
        return self.and_all(self.NOT(self.XOR(x, y)) for x, y in zip(a, b))

    def const_word(self, value, width):
        return [ONE if (value >> i) & 1 else ZERO for i in range(width)]

    def build(self, outputs) -> BooleanCircuit:
        outputs = list(outputs)
        live = set()
        stack = [o for o in outputs if o >= self.n_inputs]
        while stack:
            w = stack.pop()
            if w in live:
                continue
            live.add(w)
            g = self.gates[w - self.n_inputs]
            for v in (g.a, g.b)[: cc.ARITY[g.op]]:
                if v >= self.n_inputs:
                    stack.append(v)
        remap = {i: i for i in range(self.n_inputs)}
        gates: list[Gate] = []
        for w in sorted(live):
            g = self.gates[w - self.n_inputs]
            args = [remap[v] for v in (g.a, g.b)[: cc.ARITY[g.op]]] + [0, 0]
            remap[w] = self.n_inputs + len(gates)
            gates.append(Gate(g.op, args[0], args[1]))
        consts = {}
        outs = []
        for o in outputs:
            if o in (ZERO, ONE):
                if o not in consts:
                    consts[o] = self.n_inputs + len(gates)
                    gates.append(Gate(cc.CONST1 if o == ONE else cc.CONST0))
                outs.append(consts[o])
            else:
                outs.append(remap[o])
        return BooleanCircuit(self.n_inputs, tuple(gates), tuple(outs))


# -- encodable circuit classes ---------------------------------------------

@dataclass(frozen=True)
class CircuitClass:
    """All circuits on ``n_inputs`` inputs with at most ``max_gates`` gates
    and exactly ``n_outputs`` outputs, encoded in ``w`` bits."""

    n_inputs: int
    max_gates: int
    n_outputs: int = 1

    @property
    def w(self) -> int:
        return cc.encoding_length(self.max_gates, self.n_outputs)

    @property
    def ref_bits(self) -> int:
        return max(1, (self.n_inputs + self.max_gates - 1).bit_length())

    def contains(self, C: BooleanCircuit) -> bool:
        return (C.n_inputs == self.n_inputs and C.n_gates <= self.max_gates
                and C.n_outputs == self.n_outputs)

    def encode(self, C: BooleanCircuit):
        from .errors import ClassBoundExceeded

        if not self.contains(C):
            raise ClassBoundExceeded(
                f"circuit ({C.n_inputs} in, {C.n_gates} gates, {C.n_outputs} out) "
                f"outside class ({self.n_inputs}, {self.max_gates}, {self.n_outputs})")
        return cc.encode_circuit(C, self.w)


def widen(C: BooleanCircuit, n_inputs: int) -> BooleanCircuit:
    """The same function on ``n_inputs`` inputs; extra inputs are ignored."""
    extra = n_inputs - C.n_inputs
    if extra < 0:
        raise ValueError("cannot narrow a circuit")

    def move(w):
        return w if w < C.n_inputs else w + extra

    gates = [Gate(g.op, *[move(v) if i < cc.ARITY[g.op] else 0 for i, v in enumerate((g.a, g.b))])
             for g in C.gates]
    return BooleanCircuit(n_inputs, tuple(gates), tuple(move(o) for o in C.outputs))


def universal_eval(b: CircuitBuilder, cls: CircuitClass, enc, data):
    """Wires computing decode(enc)(data) for any circuit of ``cls``.

    Only the low ``cls.ref_bits`` bits of each 16-bit ref are read; refs
    to not-yet-defined wires read as 0.  Header fields are not checked.
    """
    F, OPB = cc.FIELD_BITS, cc.OP_BITS
    k = cls.ref_bits
    wires = list(data)
    out_base = cc.HEADER_BITS
    gate_base = out_base + F * cls.n_outputs
    for g in range(cls.max_gates):
        base = gate_base + cc.GATE_BITS * g
        o0, o1, o2 = enc[base: base + OPB]
        ra = enc[base + OPB: base + OPB + k]
        rb = enc[base + OPB + F: base + OPB + F + k]
        a = b.select(ra, wires)
        bb = b.select(rb, wires)
        t0 = b.mux(o0, b.AND(a, bb), b.XOR(a, bb))
        t1 = b.AND(b.NOT(o0), b.NOT(a))
        v = b.OR(o2, b.mux(o1, t0, t1))
        wires.append(v)
    outs = []
    for j in range(cls.n_outputs):
        ref = enc[out_base + F * j: out_base + F * j + k]
        outs.append(b.select(ref, wires))
    return outs


@lru_cache(maxsize=None)
def universal_circuit(cls: CircuitClass) -> BooleanCircuit:
    """Inputs: w encoding bits, then n data bits."""
    b = CircuitBuilder(cls.w + cls.n_inputs)
    enc = b.inputs(0, cls.w)
    data = b.inputs(cls.w, cls.n_inputs)
    return b.build(universal_eval(b, cls, enc, data))


# -- GF(2^l) arithmetic ----------------------------------------------------

def gf_add(b: CircuitBuilder, x, y):
    return b.xor_words(x, y)


def gf_mul(b: CircuitBuilder, x, y, modulus: int):
    """Schoolbook product reduced modulo ``modulus`` (bit lists, LSB first)."""
    deg = len(x)
    prod = [ZERO] * (2 * deg - 1)
    for i, xi in enumerate(x):
        if xi == ZERO:
            continue
        for j, yj in enumerate(y):
            t = b.AND(xi, yj)
            if t != ZERO:
                prod[i + j] = b.XOR(prod[i + j], t)
    low = [e for e in range(deg) if (modulus >> e) & 1]
    for top in range(2 * deg - 2, deg - 1, -1):
        t = prod[top]
        if t == ZERO:
            continue
        for e in low:
            prod[top - deg + e] = b.XOR(prod[top - deg + e], t)
    return prod[:deg]


def gf_horner(b: CircuitBuilder, coeffs, x, modulus: int):
    """sum coeffs[j] * x^j with coefficient and point as bit lists."""
    acc = list(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = gf_add(b, gf_mul(b, acc, x, modulus), c)
    return acc
