import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe.algebra import BitVector
from bsfe.errors import KeyDepleted
from bsfe.signatures import Signature, SigParams, permute, sig_keygen, sign, verify, verify_circuit


def test_permutation_is_bijective_on_sample():
    xs = random.Random(3).sample(range(1 << 32), 5000)
    assert len({permute(x) for x in xs}) == len(xs)


@given(st.integers(0, 2**32), st.integers(1, 12))
def test_sign_verify(seed, lam):
    rng = random.Random(seed)
    kp = sig_keygen(lam, 2, rng)
    msg = BitVector.random(40, rng)
    sig = sign(kp, msg)
    assert verify(kp.vk, msg, sig) == 1
    assert Signature.from_bits(sig.to_bits(kp.params), kp.params) == sig


def test_wrong_message_rejected():
    rng = random.Random(1)
    kp = sig_keygen(16, 2, rng)
    m = BitVector.random(64, rng)
    sig = sign(kp, m)
    bad = sum(verify(kp.vk, BitVector.random(64, rng), sig) for _ in range(300))
    assert bad <= 2  # a 16-bit digest collides with probability 2^-16


def test_signing_budget():
    kp = sig_keygen(8, 2, random.Random(0))
    sign(kp, BitVector(1, 4))
    sign(kp, BitVector(2, 4))
    with pytest.raises(KeyDepleted):
        sign(kp, BitVector(3, 4))


def test_verify_circuit_matches_verify():
    rng = random.Random(7)
    p = SigParams(4, 2)
    kp = sig_keygen(4, 2, rng)
    C = verify_circuit(p, 12)
    for k in range(30):
        m = BitVector.random(12, rng)
        sig = sign(sig_keygen(4, 2, rng), m) if k % 3 == 0 else sign(kp, m) if k < 2 else \
            Signature(rng.randrange(2), tuple(rng.getrandbits(32) for _ in range(4)))
        x = m + sig.to_bits(p) + kp.vk.to_bits()
        assert C(x).value == verify(kp.vk, m, sig)


def test_verify_circuit_rejects_out_of_range_slot():
    rng = random.Random(2)
    p = SigParams(4, 3)
    kp = sig_keygen(4, 3, rng)
    m = BitVector.random(8, rng)
    good = sign(kp, m)
    forged = Signature(3, good.parts)
    C = verify_circuit(p, 8)
    assert C(m + forged.to_bits(p) + kp.vk.to_bits()).value == 0
    assert C(m + good.to_bits(p) + kp.vk.to_bits()).value == 1
