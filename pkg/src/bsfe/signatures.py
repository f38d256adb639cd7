"""Stateful hash-then-sign Lamport signatures over a toy hash.

The toy permutation is a Simon-style Feistel network on two 16-bit
halves, small enough that signature verification compiles to a circuit
of a few tens of thousands of gates.  It is NOT a secure hash: it exists
so the verify-then-evaluate program can be garbled at desk scale.

* one-way map for Lamport keys: ``F(x) = P(x) xor x`` on 32 bits
* message digest: a sponge absorbing 16-bit blocks into the left half,
  initial state ``(0, length mod 2^16)``, output the low ``d`` bits of the
  final state (left half first)

A key pair holds ``max_sigs`` independent slots of ``d`` preimage pairs;
each signature uses the next unused slot and carries its index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import BitVector
from .builder import ONE, ZERO, CircuitBuilder
from .errors import KeyDepleted, ParameterError

HALF = 16
STATE_BITS = 2 * HALF
HASH_BITS = STATE_BITS
ROUNDS = 12
_HMASK = (1 << HALF) - 1


def _round_constants():
    # 16-bit Fibonacci LFSR (taps 16,14,13,11) from a fixed nonzero seed
    state, out = 0xACE1, []
    for _ in range(ROUNDS):
        word = 0
        for i in range(HALF):
            bit = (state ^ (state >> 2) ^ (state >> 3) ^ (state >> 5)) & 1
            state = (state >> 1) | (bit << 15)
            word |= (state & 1) << i
        out.append(word)
    return tuple(out)


ROUND_CONSTANTS = _round_constants()


def _rotl(x, r):
    return ((x << r) | (x >> (HALF - r))) & _HMASK


def _f(x):
    return (_rotl(x, 1) & _rotl(x, 8)) ^ _rotl(x, 2)


def permute(state: int) -> int:
    left, right = state & _HMASK, state >> HALF
    for k in ROUND_CONSTANTS:
        left, right = right ^ _f(left) ^ k, left
    return left | (right << HALF)


def one_way(x: int) -> int:
    return permute(x) ^ x


def digest(msg: BitVector, d: int) -> int:
    if not 1 <= d <= STATE_BITS:
        raise ParameterError(f"digest length {d} outside 1..{STATE_BITS}")
    state = (msg.length & _HMASK) << HALF
    v = msg.value
    for start in range(0, max(msg.length, 1), HALF):
        state ^= (v >> start) & _HMASK
        state = permute(state)
    return state & ((1 << d) - 1)


# -- the same functions as circuits ----------------------------------------

def _rotl_w(x, r):
    return [x[(i - r) % HALF] for i in range(HALF)]


def permute_wires(b: CircuitBuilder, state):
    left, right = list(state[:HALF]), list(state[HALF:])
    for k in ROUND_CONSTANTS:
        r1, r8, r2 = _rotl_w(left, 1), _rotl_w(left, 8), _rotl_w(left, 2)
        f = [b.XOR(b.AND(p, q), t) for p, q, t in zip(r1, r8, r2)]
        new_left = []
        for i in range(HALF):
            w = b.XOR(right[i], f[i])
            new_left.append(b.NOT(w) if (k >> i) & 1 else w)
        left, right = new_left, left
    return left + right


def one_way_wires(b: CircuitBuilder, x):
    return b.xor_words(permute_wires(b, x), x)


def digest_wires(b: CircuitBuilder, msg, d: int):
    state = b.const_word(0, HALF) + b.const_word(len(msg) & _HMASK, HALF)
    for start in range(0, max(len(msg), 1), HALF):
        block = list(msg[start: start + HALF])
        block += b.const_word(0, HALF - len(block))
        state = b.xor_words(state[:HALF], block) + state[HALF:]
        state = permute_wires(b, state)
    return state[:d]


# -- keys and signatures ---------------------------------------------------

@dataclass(frozen=True)
class SigParams:
    digest_bits: int = 16
    max_sigs: int = 2

    def __post_init__(self):
        if self.max_sigs < 1:
            raise ParameterError("max_sigs must be >= 1")
        if not 1 <= self.digest_bits <= STATE_BITS:
            raise ParameterError("digest_bits outside 1..32")

    @property
    def slot_bits(self) -> int:
        return max(1, (self.max_sigs - 1).bit_length())

    @property
    def sig_bits(self) -> int:
        return self.slot_bits + self.digest_bits * HASH_BITS

    @property
    def vk_bits(self) -> int:
        return self.max_sigs * self.digest_bits * 2 * HASH_BITS


@dataclass(frozen=True)
class VerifyKey:
    params: SigParams
    hashes: tuple  # [slot][i][b] -> 32-bit int

    def to_bits(self) -> BitVector:
        v, pos = 0, 0
        for slot in self.hashes:
            for pair in slot:
                for h in pair:
                    v |= h << pos
                    pos += HASH_BITS
        return BitVector(v, pos)

    def size(self) -> int:
        return sum(len(pair) for slot in self.hashes for pair in slot)


@dataclass(frozen=True)
class Signature:
    slot: int
    parts: tuple[int, ...]

    def to_bits(self, params: SigParams) -> BitVector:
        v = self.slot
        for i, p in enumerate(self.parts):
            v |= p << (params.slot_bits + HASH_BITS * i)
        return BitVector(v, params.sig_bits)

    @classmethod
    def from_bits(cls, bits: BitVector, params: SigParams) -> Signature:
        v = bits.value
        slot = v & ((1 << params.slot_bits) - 1)
        parts = tuple((v >> (params.slot_bits + HASH_BITS * i)) & ((1 << HASH_BITS) - 1)
                      for i in range(params.digest_bits))
        return cls(slot, parts)


@dataclass
class SigKeyPair:
    params: SigParams
    sk: list        # [slot][i][b] -> 32-bit preimage
    vk: VerifyKey
    next_slot: int = 0
    used: list = field(default_factory=list)


def sig_keygen(lam: int, max_sigs: int, rng) -> SigKeyPair:
    """``lam`` is the digest length in bits (at most 32 for the toy hash)."""
    params = SigParams(digest_bits=lam, max_sigs=max_sigs)
    sk = [[(rng.getrandbits(HASH_BITS), rng.getrandbits(HASH_BITS)) for _ in range(lam)]
          for _ in range(max_sigs)]
    vk = VerifyKey(params, tuple(tuple((one_way(a), one_way(b)) for a, b in slot) for slot in sk))
    return SigKeyPair(params, sk, vk)


def sign(kp: SigKeyPair, msg: BitVector) -> Signature:
    if kp.next_slot >= kp.params.max_sigs:
        raise KeyDepleted()
    slot = kp.next_slot
    kp.next_slot += 1
    kp.used.append(slot)
    h = digest(msg, kp.params.digest_bits)
    return Signature(slot, tuple(kp.sk[slot][i][(h >> i) & 1] for i in range(kp.params.digest_bits)))


def verify(vk: VerifyKey, msg: BitVector, sig: Signature) -> int:
    p = vk.params
    if not 0 <= sig.slot < p.max_sigs or len(sig.parts) != p.digest_bits:
        return 0
    h = digest(msg, p.digest_bits)
    slot = vk.hashes[sig.slot]
    return int(all(one_way(part) == slot[i][(h >> i) & 1] for i, part in enumerate(sig.parts)))


def verify_wires(b: CircuitBuilder, params: SigParams, msg, sig, vk):
    """Wire computing verify(vk, msg, sig); all three are wire lists in
    the ``to_bits`` layouts.  Slot indices >= max_sigs read as invalid."""
    d = params.digest_bits
    slot_bits = sig[: params.slot_bits]
    h = digest_wires(b, msg, d)
    checks = []
    if (1 << params.slot_bits) > params.max_sigs:
        # out-of-range slot index
        checks.append(b.select(slot_bits, [ONE] * params.max_sigs, default=ZERO))
    for i in range(d):
        part = sig[params.slot_bits + HASH_BITS * i: params.slot_bits + HASH_BITS * (i + 1)]
        cands = []
        for slot in range(params.max_sigs):
            for bit in (0, 1):
                off = HASH_BITS * (2 * (slot * d + i) + bit)
                cands.append(vk[off: off + HASH_BITS])
        # index = bit h_i, then slot bits
        expected = b.select_word([h[i]] + list(slot_bits), cands)
        checks.append(b.eq_words(one_way_wires(b, part), expected))
    return b.and_all(checks)


def verify_circuit(params: SigParams, msg_bits: int):
    """Inputs: message, then signature, then verify key; one output bit."""
    n = msg_bits + params.sig_bits + params.vk_bits
    b = CircuitBuilder(n)
    msg = b.inputs(0, msg_bits)
    sig = b.inputs(msg_bits, params.sig_bits)
    vk = b.inputs(msg_bits + params.sig_bits, params.vk_bits)
    return b.build([verify_wires(b, params, msg, sig, vk)])
