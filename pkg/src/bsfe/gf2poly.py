"""Polynomials over GF(2) packed into Python ints (bit i = coefficient of x^i)."""

from functools import lru_cache
from itertools import combinations


def degree(p):
    return p.bit_length() - 1


def clmul(a, b):
    """Carry-less product, 4-bit windowed."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    if b < 16:
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        return r
    table = [0] * 16
    for t in range(1, 16):
        low = t & -t
        table[t] = table[t ^ low] ^ (b << (low.bit_length() - 1))
    r = 0
    shift = (a.bit_length() + 3) // 4 * 4
    while shift > 0:
        shift -= 4
        r = (r << 4) ^ table[(a >> shift) & 15]
    return r


def square(a):
    """Square in GF(2)[x]: interleave zeros between coefficient bits."""
    if a == 0:
        return 0
    return int("0".join(format(a, "b")), 2)


def polymod(a, m):
    dm = degree(m)
    while True:
        da = degree(a)
        if da < dm:
            return a
        a ^= m << (da - dm)


def polygcd(a, b):
    while b:
        a, b = b, polymod(a, b)
    return a


class SparseReducer:
    """Reduction modulo a low-weight polynomial by folding the high part."""

    def __init__(self, modulus):
        self.modulus = modulus
        self.deg = degree(modulus)
        self.mask = (1 << self.deg) - 1
        low = modulus & self.mask
        self.exps = [i for i in range(self.deg) if (low >> i) & 1]
        self.dense = max(self.exps, default=0) > self.deg // 2

    def __call__(self, a):
        if self.dense:
            return polymod(a, self.modulus)
        d, mask, exps = self.deg, self.mask, self.exps
        while a >> d:
            hi = a >> d
            a &= mask
            for e in exps:
                a ^= hi << e
        return a


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_rabin(f):
    """Rabin's test: x^(2^d) = x mod f and gcd(x^(2^(d/p)) - x, f) = 1 for primes p | d."""
    d = degree(f)
    if d < 1:
        return False
    if d == 1:
        return True
    if not f & 1:
        return False
    red = SparseReducer(f)
    checkpoints = {d // p for p in _prime_factors(d)}
    h = 2  # x
    for k in range(1, d + 1):
        h = red(square(h))
        if k in checkpoints and polygcd(f, h ^ 2) != 1:
            return False
    return h == 2


def is_irreducible_exhaustive(f):
    """Trial division by every polynomial of degree 1..deg(f)//2."""
    d = degree(f)
    if d < 1:
        return False
    for g in range(2, 1 << (d // 2 + 1)):
        if polymod(f, g) == 0:
            return False
    return True


def _colex(k, bound):
    """k-subsets of {1..bound-1} in increasing order of sum(2**i)."""
    if k == 0:
        yield ()
        return
    for top in range(k, bound):
        for rest in _colex(k - 1, top):
            yield rest + (top,)


def _candidates(d):
    """Monic, constant-term-1 polynomials of degree d: weight first, then integer value."""
    if d == 1:
        yield 0b10
        yield 0b11
        return
    top = (1 << d) | 1
    for k in range(1, d, 2):  # odd middle count, else x+1 divides
        for ms in _colex(k, d):
            yield top | sum(1 << m for m in ms)


def lowest_weight_irreducible(d, test=is_irreducible_rabin):
    """Lowest-weight irreducible of degree d, ties broken by smallest integer value."""
    for f in _candidates(d):
        if test(f):
            return f
    raise ValueError(f"no irreducible of degree {d}")  # unreachable for d >= 1


@lru_cache(maxsize=None)
def exponents(f):
    return tuple(i for i in range(f.bit_length()) if (f >> i) & 1)
