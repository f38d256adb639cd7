import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe.algebra import BitVector, field
from bsfe.builder import CircuitBuilder, CircuitClass, gf_horner, gf_mul, universal_circuit, widen
from bsfe.circuits import CONST0, fixtures
from bsfe.errors import ClassBoundExceeded

from test_circuits import random_circuit


def test_class_width():
    assert CircuitClass(4, 8, 1).w == 344
    assert CircuitClass(2, 1, 1).w == 99


def test_class_membership():
    cls = CircuitClass(4, 8, 1)
    assert cls.contains(fixtures()["and4"])
    assert not cls.contains(fixtures()["adder2"])
    with pytest.raises(ClassBoundExceeded):
        cls.encode(fixtures()["adder2"])


@pytest.mark.parametrize("name", ["and4", "parity4", "eq2"])
def test_universal_circuit_runs_encoded_fixture(name):
    C = fixtures()[name]
    cls = CircuitClass(4, 8, 1)
    U = universal_circuit(cls)
    enc = cls.encode(C).bits
    for v in range(16):
        x = BitVector(v, 4)
        assert U(enc + x) == C(x)


@given(st.integers(0, 2**32))
def test_universal_circuit_random_members(seed):
    rng = random.Random(seed)
    cls = CircuitClass(3, 5, 2)
    C = random_circuit(rng, n_in=3, n_gates=rng.randint(0, 5))
    while C.n_outputs != 2:
        C = random_circuit(rng, n_in=3, n_gates=rng.randint(0, 5))
    U = universal_circuit(cls)
    for v in range(8):
        x = BitVector(v, 3)
        assert U(cls.encode(C).bits + x) == C(x)


def test_widen_ignores_extra_inputs():
    C = fixtures()["xor"]
    W = widen(C, 4)
    for v in range(16):
        assert W(BitVector(v, 4)) == C(BitVector(v & 3, 2))


@given(st.integers(0, 255), st.integers(0, 255))
def test_gf_mul_circuit(a, b):
    F = field(8)
    bld = CircuitBuilder(16)
    C = bld.build(gf_mul(bld, bld.inputs(0, 8), bld.inputs(8, 8), F.modulus))
    assert C(BitVector(a, 8) + BitVector(b, 8)).value == (F(a) * F(b)).value


@given(st.lists(st.integers(0, 255), min_size=1, max_size=4), st.integers(0, 255))
def test_gf_horner_circuit(coeffs, z):
    F = field(8)
    k = len(coeffs)
    bld = CircuitBuilder(8 * (k + 1))
    cs = [bld.inputs(8 * j, 8) for j in range(k)]
    out = gf_horner(bld, cs, bld.inputs(8 * k, 8), F.modulus)
    C = bld.build(out)
    x = BitVector(0, 0)
    for c in coeffs:
        x = x + BitVector(c, 8)
    x = x + BitVector(z, 8)
    want = F.zero
    for j, c in enumerate(coeffs):
        want = want + F(c) * F(z) ** j
    assert C(x).value == want.value


def test_builder_folds_and_shares():
    b = CircuitBuilder(2)
    x, y = b.inputs()
    g1 = b.AND(x, y)
    assert b.AND(x, y) == g1
    assert b.NOT(b.NOT(x)) == x
    C = b.build([b.XOR(g1, g1)])
    # x ^ x folds to the zero constant; the AND is dropped as dead
    assert [g.op for g in C.gates] == [CONST0]
