import random

import pytest

from bsfe import cbqs_fe as fe
from bsfe import signatures as sig
from bsfe.algebra import BitVector
from bsfe.builder import widen
from bsfe.channel import MemoryLedger
from bsfe.circuits import eval_circuit, fixtures
from bsfe.errors import ShapeError

PARAMS = fe.CbqsParams()


@pytest.fixture
def keys():
    return fe.cbqsfe_setup(PARAMS.lam, random.Random(9), PARAMS)


@pytest.mark.parametrize("name", ["and", "majority", "eq2", "parity4"])
def test_correct_on_class_members(keys, name):
    C = widen(fixtures()[name], PARAMS.cls.n_inputs)
    sk = fe.cbqsfe_keygen(keys, C)
    rng = random.Random(name)
    n = PARAMS.cls.n_inputs
    for v in range(0, 1 << n, 3):
        mu = BitVector(v, n)
        ct = fe.cbqsfe_enc(keys.pk, mu, PARAMS.s, rng, PARAMS)
        led = MemoryLedger("evaluator", 0)
        assert fe.cbqsfe_dec(sk, ct, rng, led) == eval_circuit(C, mu) and led.ok


def test_bad_signature_rejected(keys):
    C = fixtures()["and4"]
    sk = fe.cbqsfe_keygen(keys, C)
    bad = sig.Signature(sk.sigma.slot, (sk.sigma.parts[0] ^ 1,) + sk.sigma.parts[1:])
    rng = random.Random(0)
    ct = fe.cbqsfe_enc(keys.pk, BitVector(3, 4), PARAMS.s, rng, PARAMS)
    assert fe.cbqsfe_dec(fe.CbqsFuncKey(C, bad), ct, rng) is None


def test_unsigned_circuit_rejected(keys):
    sk = fe.cbqsfe_keygen(keys, fixtures()["and4"])
    rng = random.Random(1)
    ct = fe.cbqsfe_enc(keys.pk, BitVector(3, 4), PARAMS.s, rng, PARAMS)
    assert fe.cbqsfe_dec(fe.CbqsFuncKey(fixtures()["parity4"], sk.sigma), ct, rng) is None


def test_message_width_checked(keys):
    with pytest.raises(ShapeError):
        fe.cbqsfe_enc(keys.pk, BitVector(0, 3), PARAMS.s, random.Random(0), PARAMS)


def test_decode_output():
    assert fe.decode_output(BitVector.from_str("101")) is not None
    assert fe.decode_output(BitVector.from_str("100")) is None


def test_input_layout_width():
    assert PARAMS.input_bits == PARAMS.cls.w + PARAMS.sig.sig_bits
    sk_bits = fe.key_input(PARAMS, fixtures()["and4"], sig.Signature(0, (0,) * PARAMS.sig.digest_bits))
    assert sk_bits.length == PARAMS.input_bits
