"""Bit vectors and matrices over GF(2), GF(2^l) arithmetic, Toeplitz hashing.

Bit order everywhere: index 0 is the least significant bit of the packed
int, and serialisation is little-endian in bit index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import gf2poly, kernels
from .errors import FieldError, ParameterError, ShapeError


def parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class BitVector:
    """Immutable bit string packed into an int."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ShapeError("negative length")
        if self.value < 0 or self.value >> self.length:
            raise ShapeError("value does not fit length")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        bits = list(bits)
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ShapeError(f"bit {i} is {b!r}")
            value |= b << i
        return cls(value, len(bits))

    @classmethod
    def from_str(cls, s: str) -> BitVector:
        """Parse '0'/'1' characters, index 0 first."""
        return cls.from_bits(int(c) for c in s)

    @classmethod
    def zeros(cls, n: int) -> BitVector:
        return cls(0, n)

    @classmethod
    def random(cls, n: int, rng) -> BitVector:
        return cls(rng.getrandbits(n) if n else 0, n)

    @classmethod
    def unit(cls, n: int, i: int) -> BitVector:
        return cls(1 << i, n)

    def __len__(self):
        return self.length

    def __getitem__(self, i):
        if isinstance(i, slice):
            start, stop, step = i.indices(self.length)
            if step == 1:
                n = max(0, stop - start)
                return BitVector((self.value >> start) & ((1 << n) - 1), n)
            return BitVector.from_bits(self[j] for j in range(start, stop, step))
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __iter__(self):
        v = self.value
        for _ in range(self.length):
            yield v & 1
            v >>= 1

    def _check(self, other):
        if not isinstance(other, BitVector) or other.length != self.length:
            raise ShapeError(f"length {self.length} vs {getattr(other, 'length', other)}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.value ^ other.value, self.length)

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.value & other.value, self.length)

    def __add__(self, other: BitVector) -> BitVector:
        """Concatenation; ``other`` occupies the higher indices."""
        return BitVector(self.value | (other.value << self.length), self.length + other.length)

    def dot(self, other: BitVector) -> int:
        self._check(other)
        return parity(self.value & other.value)

    def weight(self) -> int:
        return self.value.bit_count()

    def to_bits(self) -> list[int]:
        return list(self)

    def to_str(self) -> str:
        return format(self.value, f"0{self.length}b")[::-1] if self.length else ""

    def pad(self, n: int) -> BitVector:
        if n < self.length:
            raise ShapeError(f"cannot pad {self.length} bits to {n}")
        return BitVector(self.value, n)

    def __repr__(self):
        return f"BitVector('{self.to_str()}')"


@dataclass(frozen=True)
class BitMatrix:
    """Row-major GF(2) matrix; ``data[j]`` packs row j (bit k = column k)."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ShapeError("row count")
        lim = 1 << self.cols
        if any(r < 0 or r >= lim for r in self.data):
            raise ShapeError("row wider than cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int] | BitVector], cols: int | None = None) -> BitMatrix:
        packed = [r if isinstance(r, BitVector) else BitVector.from_bits(r) for r in rows]
        if cols is None:
            cols = packed[0].length if packed else 0
        if any(r.length != cols for r in packed):
            raise ShapeError("ragged rows")
        return cls(len(packed), cols, tuple(r.value for r in packed))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def random(cls, rows: int, cols: int, rng) -> BitMatrix:
        return cls(rows, cols, tuple(rng.getrandbits(cols) if cols else 0 for _ in range(rows)))

    def row(self, j: int) -> BitVector:
        return BitVector(self.data[j], self.cols)

    def __getitem__(self, jk):
        j, k = jk
        return (self.data[j] >> k) & 1

    def transpose(self) -> BitMatrix:
        out = [0] * self.cols
        for j, r in enumerate(self.data):
            k = 0
            while r:
                if r & 1:
                    out[k] |= 1 << j
                r >>= 1
                k += 1
        return BitMatrix(self.cols, self.rows, tuple(out))

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return BitMatrix(self.rows, other.cols,
                         tuple(vec_mat_mul(BitVector(r, self.cols), other).value for r in self.data))


def mat_vec_mul(M: BitMatrix, v: BitVector) -> BitVector:
    """M·v over GF(2)."""
    if v.length != M.cols:
        raise ShapeError(f"matrix has {M.cols} cols, vector has {v.length} bits")
    x = v.value
    out = 0
    for j, r in enumerate(M.data):
        out |= ((r & x).bit_count() & 1) << j
    return BitVector(out, M.rows)


def vec_mat_mul(v: BitVector, M: BitMatrix) -> BitVector:
    """v·M: XOR of the rows of M selected by v."""
    if v.length != M.rows:
        raise ShapeError(f"vector has {v.length} bits, matrix has {M.rows} rows")
    acc, x, j = 0, v.value, 0
    while x:
        if x & 1:
            acc ^= M.data[j]
        x >>= 1
        j += 1
    return BitVector(acc, M.cols)


# -- GF(2^l) ---------------------------------------------------------------

EXHAUSTIVE_LIMIT = 16


class GF2k:
    """The field GF(2)[x]/(modulus).  Use :func:`field` for cached instances."""

    def __init__(self, degree: int, modulus: int | None = None):
        if degree < 1:
            raise ParameterError("field degree must be >= 1")
        if modulus is None:
            modulus = default_modulus(degree)
        elif gf2poly.degree(modulus) != degree:
            raise FieldError(f"modulus degree {gf2poly.degree(modulus)} != {degree}")
        elif degree <= EXHAUSTIVE_LIMIT and not gf2poly.is_irreducible_exhaustive(modulus):
            raise FieldError(f"modulus {modulus:#x} is reducible")
        self.degree = degree
        self.modulus = modulus
        self.order = 1 << degree
        self._reduce = gf2poly.SparseReducer(modulus)

    def __eq__(self, other):
        return isinstance(other, GF2k) and (self.degree, self.modulus) == (other.degree, other.modulus)

    def __hash__(self):
        return hash((self.degree, self.modulus))

    def __repr__(self):
        return f"GF2k({self.degree}, {self.modulus:#x})"

    def __call__(self, value: int) -> F2kElement:
        return F2kElement(value, self)

    @property
    def zero(self) -> F2kElement:
        return F2kElement(0, self)

    @property
    def one(self) -> F2kElement:
        return F2kElement(1, self)

    def random(self, rng) -> F2kElement:
        return F2kElement(rng.getrandbits(self.degree), self)

    def mul_int(self, a: int, b: int) -> int:
        if self.degree <= 32:
            return kernels.gf_mul_small(a, b, self.modulus, self.degree)
        return self._reduce(gf2poly.clmul(a, b))

    def elements(self):
        return [F2kElement(v, self) for v in range(self.order)]


@lru_cache(maxsize=None)
def default_modulus(degree: int) -> int:
    if degree <= EXHAUSTIVE_LIMIT:
        return gf2poly.lowest_weight_irreducible(degree, gf2poly.is_irreducible_exhaustive)
    from ._irreducibles import MIDDLE_EXPONENTS

    try:
        mids = MIDDLE_EXPONENTS[degree]
    except KeyError:
        raise ParameterError(f"no built-in modulus for degree {degree}") from None
    return (1 << degree) | 1 | sum(1 << e for e in mids)


@lru_cache(maxsize=None)
def field(degree: int) -> GF2k:
    return GF2k(degree)


@dataclass(frozen=True)
class F2kElement:
    value: int
    field: GF2k

    def __post_init__(self):
        if self.value < 0 or self.value >> self.field.degree:
            raise FieldError(f"value {self.value:#x} has more than {self.field.degree} bits")

    def _same(self, other):
        if not isinstance(other, F2kElement) or other.field != self.field:
            raise FieldError(f"{self.field!r} vs {getattr(other, 'field', type(other).__name__)!r}")

    def __add__(self, other: F2kElement) -> F2kElement:
        self._same(other)
        return F2kElement(self.value ^ other.value, self.field)

    __sub__ = __add__

    def __mul__(self, other: F2kElement) -> F2kElement:
        return f2k_mul(self, other)

    def __pow__(self, e: int) -> F2kElement:
        result, base = self.field.one, self
        if e < 0:
            base, e = base.inverse(), -e
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> F2kElement:
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __bool__(self):
        return self.value != 0

    def to_bits(self) -> BitVector:
        return BitVector(self.value, self.field.degree)

    def __repr__(self):
        return f"F2k({self.value:#x}/{self.field.degree})"


def f2k_mul(a: F2kElement, b: F2kElement) -> F2kElement:
    a._same(b)
    return F2kElement(a.field.mul_int(a.value, b.value), a.field)


@dataclass(frozen=True)
class Polynomial:
    """Coefficient list, index = power of x."""

    coeffs: tuple[F2kElement, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ShapeError("polynomial needs at least one coefficient")
        f = self.coeffs[0].field
        if any(c.field != f for c in self.coeffs):
            raise FieldError("mixed coefficient fields")

    @property
    def field(self) -> GF2k:
        return self.coeffs[0].field

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def poly_eval(P: Polynomial, x: F2kElement) -> F2kElement:
    """Horner evaluation of P at x."""
    F = P.field
    if x.field != F:
        raise FieldError(f"point in {x.field!r}, polynomial over {F!r}")
    mul, xv, acc = F.mul_int, x.value, 0
    for c in reversed(P.coeffs):
        acc = mul(acc, xv) ^ c.value
    return F2kElement(acc, F)


# -- two-universal hashing -------------------------------------------------

def toeplitz_apply(seed: int, x: int, in_len: int, out_len: int) -> int:
    """Packed-int Toeplitz product: bit j = parity(seed[j : j+in_len] & x)."""
    mask = (1 << in_len) - 1
    out = 0
    for j in range(out_len):
        out |= (((seed >> j) & mask & x).bit_count() & 1) << j
    return out


@dataclass(frozen=True)
class ToeplitzHash:
    seed: BitVector
    in_len: int
    out_len: int

    def __post_init__(self):
        if self.out_len < 1 or self.in_len < 0:
            raise ShapeError("hash lengths")
        if self.seed.length != self.in_len + self.out_len - 1:
            raise ShapeError(f"seed length {self.seed.length} != {self.in_len + self.out_len - 1}")

    @classmethod
    def random(cls, in_len: int, out_len: int, rng) -> ToeplitzHash:
        return cls(BitVector.random(in_len + out_len - 1, rng), in_len, out_len)

    def __call__(self, x: BitVector) -> BitVector:
        return toeplitz_hash(self, x)


def toeplitz_hash(h: ToeplitzHash, x: BitVector) -> BitVector:
    if x.length != h.in_len:
        raise ShapeError(f"hash expects {h.in_len} bits, got {x.length}")
    return BitVector(toeplitz_apply(h.seed.value, x.value, h.in_len, h.out_len), h.out_len)
