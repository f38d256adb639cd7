"""Information-theoretic functional encryption in the bounded quantum
storage model.

The master secret is an ``mr x mr`` matrix ``M`` over GF(2^l).  Column
``i`` gives the polynomial ``P_i(z) = sum_j M[j, i] z^j``.

* Encryption keys: an honest receiver picks a nonzero ``v`` in {0,1}^mr and
  learns ``M v`` through ``r`` broadcasts, each a block of ``m`` rows.
* Functional keys: for a circuit with encoding ``c`` embedded in GF(2^l),
  the values ``P_i(c)`` for every ``i``, again through ``r`` broadcasts.
* A ciphertext under ``(v, Mv)`` is a one-time program accepting
  ``(c, y)``.  It outputs ``C(mu)`` when the field sum of ``y_i`` over
  ``v_i = 1`` equals ``P_v(c)``, the polynomial with coefficients ``Mv``.

Since ``sum_{v_i=1} P_i = P_v``, the honest functional key passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

from . import broadcast as br
from .algebra import BitVector, F2kElement, GF2k, field
from .builder import CircuitBuilder, CircuitClass, gf_horner, universal_eval
from .channel import MemoryLedger
from .circuits import BooleanCircuit, CircuitEncoding, decode_circuit, encode_circuit, encoding_length
from .errors import (BudgetExhausted, CircuitStructureError, ClassBoundExceeded, ParameterError,
                     ScheduleError, ShapeError)
from .otp import OtpTransmission, kil_create, kil_eval, otp_yao_receive, otp_yao_send
from .transcript import Clock, Transcript

BACKENDS = ("kil", "yao")
DEFAULT_TICK = 10


def block_size(s: int, r: int) -> int:
    """Smallest even m with m >= 2 sqrt(s/r)."""
    m = math.isqrt(4 * s // r)
    while m * m * r < 4 * s:
        m += 1
    return max(2, m + (m & 1))


@dataclass(frozen=True)
class BqsFeParams:
    s: int
    r: int
    lam: int
    w: int
    ell_override: int | None = None
    honest_budget: int | None = None
    unit: str = "symbol"
    tick: int = DEFAULT_TICK

    def __post_init__(self):
        if not 1 <= self.r < self.s:
            raise ParameterError(f"need 1 <= r < s, got r={self.r}, s={self.s}")
        if self.lam < 1 or self.w < 1:
            raise ParameterError("lambda and w must be positive")
        if self.honest_budget is not None and self.honest_budget < self.min_honest_budget:
            raise ParameterError(f"honest budget {self.honest_budget} below sqrt(s/r) = "
                                 f"{math.sqrt(self.s / self.r):.3f}")

    @property
    def m(self) -> int:
        return block_size(self.s, self.r)

    @property
    def mr(self) -> int:
        return self.m * self.r

    @property
    def ell(self) -> int:
        return self.ell_override or max(self.lam, self.w)

    @property
    def embeds_circuits(self) -> bool:
        return self.ell >= self.w

    @property
    def min_honest_budget(self) -> int:
        # no scheme of this kind works with less than sqrt(s/r) honest qubits
        return math.ceil(math.sqrt(self.s / self.r))

    @property
    def budget(self) -> int:
        """Honest memory in the ledger's units."""
        if self.honest_budget is not None:
            return self.honest_budget
        return br.HONEST_FACTOR * self.m * (self.ell if self.unit == "bit" else 1)

    @property
    def peak_bound(self) -> float:
        return 24 * math.sqrt(self.s / self.r)

    @property
    def gf(self) -> GF2k:
        return field(self.ell)

    def schedule(self, start: int = 0) -> tuple[int, ...]:
        return tuple(start + self.tick * k for k in range(2 * self.r + 1))


@dataclass
class MasterSecret:
    params: BqsFeParams
    M: list[list[int]]        # row j, column i
    T: tuple[int, ...]

    def column(self, i: int) -> list[int]:
        return [row[i] for row in self.M]


@dataclass(frozen=True)
class EncKey:
    v: BitVector
    Mv: tuple[F2kElement, ...]


@dataclass(frozen=True)
class FuncKey:
    C_enc: F2kElement
    values: tuple[F2kElement, ...]
    C: BooleanCircuit | None = None


def bqsfe_setup(lam: int, s: int, r: int, rng, w: int | None = None, *, clock: Clock | None = None,
                params: BqsFeParams | None = None) -> MasterSecret:
    if params is None:
        params = BqsFeParams(s, r, lam, w if w is not None else lam)
    F, n = params.gf, params.mr
    M = [[rng.getrandbits(F.degree) for _ in range(n)] for _ in range(n)]
    start = clock.now if clock is not None else 0
    return MasterSecret(params, M, params.schedule(start))


# -- arithmetic on raw field ints -------------------------------------------

def select_sum(values: Sequence[int], v: BitVector) -> int:
    acc = 0
    for i, x in enumerate(values):
        if v[i]:
            acc ^= x
    return acc


def horner(F: GF2k, coeffs: Sequence[int], z: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = F.mul_int(acc, z) ^ c
    return acc


def row_block(msec: MasterSecret, i: int, x: BitVector) -> tuple[int, ...]:
    """F_i(x): rows m*i .. m*(i+1)-1 of M applied to binary x."""
    m = msec.params.m
    return tuple(select_sum(msec.M[j], x) for j in range(m * i, m * (i + 1)))


def column_block(msec: MasterSecret, i: int, z: int) -> tuple[int, ...]:
    """P_k(z) for the m columns k of block i."""
    m, F = msec.params.m, msec.params.gf
    return tuple(horner(F, msec.column(k), z) for k in range(m * i, m * (i + 1)))


# -- key distribution ---------------------------------------------------------

def _window(msec: MasterSecret, k: int, clock: Clock) -> tuple[int, int]:
    lo, hi = msec.T[k], msec.T[k + 1]
    if not lo <= clock.now < hi:
        raise ScheduleError(f"tick {clock.now} outside window [{lo}, {hi})")
    return lo, hi - 1


def _handle(msec, program, k, clock, transcript):
    lo, hi = _window(msec, k, clock)
    p = msec.params
    return br.br_setup(program, p.s, hi, p.m, clock=clock, t_start=lo, unit=p.unit,
                       symbol_bits=p.ell, transcript=transcript)


def bqsfe_pk_send(msec: MasterSecret, i: int, clock: Clock, transcript: Transcript | None = None):
    """Broadcast of F_i; must be opened inside window i."""
    if not 0 <= i < msec.params.r:
        raise IndexError(i)
    return _handle(msec, lambda x: row_block(msec, i, x), i, clock, transcript)


def bqsfe_mk_send(msec: MasterSecret, i: int, clock: Clock, transcript: Transcript | None = None):
    """Broadcast of the column polynomials of block i; window r + i."""
    if not 0 <= i < msec.params.r:
        raise IndexError(i)
    return _handle(msec, lambda z: column_block(msec, i, z), msec.params.r + i, clock, transcript)


def _phase(send, msec, offset, clock, transcript):
    handles = []
    for i in range(msec.params.r):
        clock.set(max(clock.now, msec.T[offset + i]))
        handles.append(send(msec, i, clock, transcript))
    return handles


def bqsfe_pk_phase(msec: MasterSecret, clock: Clock, transcript: Transcript | None = None):
    """Open the r encryption-key broadcasts in their windows."""
    return _phase(bqsfe_pk_send, msec, 0, clock, transcript)


def bqsfe_mk_phase(msec: MasterSecret, clock: Clock, transcript: Transcript | None = None):
    return _phase(bqsfe_mk_send, msec, msec.params.r, clock, transcript)


def close_all(handles) -> None:
    for h in handles:
        br.br_close(h)


def honest_ledger(params: BqsFeParams, owner: str = "receiver", transcript: Transcript | None = None):
    return MemoryLedger(owner, params.budget, transcript=transcript)


def bqsfe_pk_receive(handles, params: BqsFeParams, rng, ledger: MemoryLedger | None = None) -> EncKey:
    F, n = params.gf, params.mr
    v = BitVector(0, n)
    while not v.value:  # the zero key is degenerate
        v = BitVector.random(n, rng)
    ledger = ledger if ledger is not None else honest_ledger(params)
    Mv: list[int] = []
    for h in handles:
        Mv.extend(br.br_eval(h, v, br.HONEST, ledger))
    if len(Mv) != n:
        raise ShapeError(f"expected {n} symbols, got {len(Mv)}")
    return EncKey(v, tuple(F(x) for x in Mv))


def circuit_point(params: BqsFeParams, C) -> F2kElement:
    """A circuit's padded encoding read as a field element, little-endian."""
    if isinstance(C, F2kElement):
        return C
    if not params.embeds_circuits:
        raise ClassBoundExceeded(f"field of {params.ell} bits cannot hold {params.w}-bit encodings")
    if isinstance(C, CircuitEncoding):
        bits = C.bits
    else:
        bits = encode_circuit(C, params.w).bits
    return params.gf(bits.value)


def bqsfe_mk_receive(handles, params: BqsFeParams, C, ledger: MemoryLedger | None = None) -> FuncKey:
    z = circuit_point(params, C)
    ledger = ledger if ledger is not None else honest_ledger(params)
    vals: list[int] = []
    for h in handles:
        vals.extend(br.br_eval(h, z.value, br.HONEST, ledger))
    circ = C if isinstance(C, BooleanCircuit) else None
    return FuncKey(z, tuple(params.gf(x) for x in vals), circ)


# -- ciphertexts ------------------------------------------------------------

@dataclass
class BqsCiphertext:
    backend: str
    params: BqsFeParams
    n: int
    handle: object = None                       # kil handle
    transmission: OtpTransmission | None = None  # yao program
    cls: CircuitClass | None = None
    used: bool = dc_field(default=False)


def key_input(params: BqsFeParams, sk: FuncKey) -> BitVector:
    """Program input layout: the point, then the mr key values."""
    out = BitVector(sk.C_enc.value, params.ell)
    for y in sk.values:
        out = out + BitVector(y.value, params.ell)
    return out


def split_input(params: BqsFeParams, x: BitVector) -> tuple[int, list[int]]:
    ell, n = params.ell, params.mr
    if x.length != ell * (n + 1):
        raise ShapeError(f"program input has {x.length} bits, expected {ell * (n + 1)}")
    mask = (1 << ell) - 1
    parts = [(x.value >> (ell * k)) & mask for k in range(n + 1)]
    return parts[0], parts[1:]


def accepts(params: BqsFeParams, k_v: EncKey, z: int, ys: Sequence[int]) -> bool:
    coeffs = [c.value for c in k_v.Mv]
    return select_sum(ys, k_v.v) == horner(params.gf, coeffs, z)


def _kil_program(params: BqsFeParams, k_v: EncKey, mu: BitVector):
    def G(x: BitVector):
        z, ys = split_input(params, x)
        if not accepts(params, k_v, z, ys):
            return None
        if not params.embeds_circuits or z >> params.w:
            return None
        try:
            C = decode_circuit(CircuitEncoding(BitVector(z, params.w)))
        except (CircuitStructureError, ValueError):
            return None
        if C.n_inputs != mu.length:
            return None
        return C(mu)

    return G


def bqsfe_enc(k_v: EncKey, mu: BitVector, params: BqsFeParams, backend: str = "kil", *,
              rng=None, cls: CircuitClass | None = None, label_bits: int = 8,
              transcript: Transcript | None = None) -> BqsCiphertext:
    if backend not in BACKENDS:
        raise ParameterError(f"backend must be one of {BACKENDS}")
    if k_v.v.length != params.mr or len(k_v.Mv) != params.mr:
        raise ShapeError("key does not match the parameters")
    if backend == "kil":
        h = kil_create(_kil_program(params, k_v, mu), transcript)
        return BqsCiphertext("kil", params, mu.length, handle=h)
    if rng is None or cls is None:
        raise ParameterError("the garbled backend needs rng and a circuit class")
    if mu.length != cls.n_inputs:
        raise ShapeError(f"message must have {cls.n_inputs} bits")
    P = yao_program_circuit(params, cls)
    fixed = BitVector(0, 0)
    for c in k_v.Mv:
        fixed = fixed + BitVector(c.value, params.ell)
    fixed = fixed + k_v.v + mu
    t = otp_yao_send(P, params.s, label_bits, rng, fixed=fixed, transcript=transcript)
    return BqsCiphertext("yao", params, mu.length, transmission=t, cls=cls)


def bqsfe_dec(sk_C: FuncKey, ct: BqsCiphertext, rng=None, ledger: MemoryLedger | None = None,
              transcript: Transcript | None = None) -> BitVector | None:
    """C(mu), or None for a rejected key."""
    if ct.used:
        raise BudgetExhausted()
    ct.used = True
    x = key_input(ct.params, sk_C)
    if ct.backend == "kil":
        return kil_eval(ct.handle, x)
    if rng is None:
        raise ParameterError("the garbled backend needs rng")
    y = otp_yao_receive(ct.transmission, x, rng, ledger, transcript)
    n = y.length - 1
    return y[:n] if y[n] else None


@lru_cache(maxsize=None)
def yao_program_circuit(params: BqsFeParams, cls: CircuitClass) -> BooleanCircuit:
    """Free inputs: point (l), key values (mr * l).
    Fixed inputs: coefficients Mv (mr * l), v (mr), message (n).
    Outputs: C(mu) masked by the acceptance bit, then the acceptance bit."""
    ell, n = params.ell, params.mr
    if ell < cls.w:
        raise ClassBoundExceeded(f"field of {ell} bits cannot hold {cls.w}-bit encodings")
    total = ell * (n + 1) + ell * n + n + cls.n_inputs
    b = CircuitBuilder(total)
    z = b.inputs(0, ell)
    ys = [b.inputs(ell * (k + 1), ell) for k in range(n)]
    base = ell * (n + 1)
    coeffs = [b.inputs(base + ell * k, ell) for k in range(n)]
    v = b.inputs(base + ell * n, n)
    mu = b.inputs(base + ell * n + n, cls.n_inputs)
    acc = b.const_word(0, ell)
    for vi, y in zip(v, ys):
        acc = b.xor_words(acc, [b.AND(vi, t) for t in y])
    expected = gf_horner(b, coeffs, z, params.gf.modulus)
    valid = b.and_all([b.eq_words(acc, expected)] + [b.NOT(t) for t in z[cls.w:]])
    outs = universal_eval(b, cls, z[: cls.w], mu)
    return b.build([b.AND(o, valid) for o in outs] + [valid])


def class_width(circuits: Sequence[BooleanCircuit]) -> int:
    """Smallest w holding every circuit's exact encoding."""
    return max(encoding_length(C.n_gates, C.n_outputs) for C in circuits)
