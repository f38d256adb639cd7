import random

import pytest

from bsfe.algebra import BitVector
from bsfe.circuits import eval_circuit, fixtures
from bsfe.errors import InvalidLabels
from bsfe.garble import WireLabel, gcircuit, geval, ginput, gsimulate, topology

from test_circuits import random_circuit
from hypothesis import given
from hypothesis import strategies as st


@pytest.mark.parametrize("label_bits", [8, 16, 64, 80, 128])
@pytest.mark.parametrize("name", sorted(fixtures()))
def test_exhaustive_agreement(name, label_bits):
    C = fixtures()[name]
    gc, key = gcircuit(C, random.Random(name), label_bits=label_bits)
    for v in range(1 << C.n_inputs):
        x = BitVector(v, C.n_inputs)
        assert geval(gc, [ginput(key, i, x[i]) for i in range(C.n_inputs)]) == eval_circuit(C, x)


@given(st.integers(0, 2**32))
def test_random_circuits(seed):
    rng = random.Random(seed)
    C = random_circuit(rng)
    gc, key = gcircuit(C, rng, label_bits=32)
    for v in range(1 << C.n_inputs):
        x = BitVector(v, C.n_inputs)
        assert geval(gc, [ginput(key, i, x[i]) for i in range(C.n_inputs)]) == eval_circuit(C, x)


def test_labels_of_a_wire_differ_in_select_bit():
    C = fixtures()["adder2"]
    _, key = gcircuit(C, random.Random(0))
    for i in range(C.n_inputs):
        a, b = key.pair(i)
        assert a.select_bit != b.select_bit


def test_forged_label_rejected():
    C = fixtures()["and"]
    gc, key = gcircuit(C, random.Random(1), label_bits=64)
    rng = random.Random(2)
    bad = 0
    for _ in range(50):
        good = ginput(key, 0, 1)
        fake = WireLabel(rng.getrandbits(64) & ~1 | good.select_bit, 64)
        try:
            geval(gc, [fake, ginput(key, 1, 1)])
        except InvalidLabels:
            bad += 1
    assert bad == 50


def test_evaluator_sees_no_xor_and_distinction():
    gc, _ = gcircuit(fixtures()["adder2"], random.Random(0))
    assert len(set(topology(fixtures()["adder2"]).kinds)) == 1


@pytest.mark.parametrize("name", ["adder2", "mux", "eq2", "const"])
def test_simulated_circuit_decodes_to_target(name):
    C = fixtures()[name]
    rng = random.Random(3)
    x = BitVector.random(C.n_inputs, rng)
    y = C(x)
    labels, gc = gsimulate(x, y, topology(C), rng)
    assert geval(gc, labels) == y
    assert gc.tables.shape == gcircuit(C, rng)[0].tables.shape
