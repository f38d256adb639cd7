import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe.algebra import BitVector
from bsfe.circuits import (AND, CONST0, CONST1, NOT, XOR, BooleanCircuit, Gate, decode_circuit, emit_circuit,
                           encode_circuit, encoding_length, eval_bitsliced, eval_circuit, fixtures,
                           parse_circuit, split_outputs, truth_table)
from bsfe.errors import CircuitStructureError, CircuitSyntaxError, ClassBoundExceeded


def plain(name, x):
    """Reference behaviour of each fixture, written from its description."""
    b = x.to_bits()
    return {
        "and": lambda: [b[0] & b[1]],
        "xor": lambda: [b[0] ^ b[1]],
        "or": lambda: [b[0] | b[1]],
        "not": lambda: [1 - b[0]],
        "passthrough": lambda: list(b),
        "mux": lambda: [b[2] if b[0] else b[1]],
        "majority": lambda: [int(sum(b) >= 2)],
        "parity4": lambda: [sum(b) % 2],
        "eq2": lambda: [int(b[:2] == b[2:])],
        "and4": lambda: [int(all(b))],
    }[name]()


@pytest.mark.parametrize("name", ["and", "xor", "or", "not", "passthrough", "majority", "parity4", "eq2", "and4"])
def test_fixture_semantics(name):
    C = fixtures()[name]
    for v in range(1 << C.n_inputs):
        x = BitVector(v, C.n_inputs)
        assert C(x).to_bits() == plain(name, x)


def test_adder_fixture_adds():
    C = fixtures()["adder2"]
    for a in range(4):
        for b in range(4):
            y = C(BitVector(a | b << 2, 4))
            assert y.value == a + b


def test_mux_selects_by_first_input():
    C = fixtures()["mux"]
    # selector in0: 0 -> in1, 1 -> in2
    assert C(BitVector.from_str("010")).to_bits() == [1]
    assert C(BitVector.from_str("101")).to_bits() == [1]
    assert C(BitVector.from_str("110")).to_bits() == [0]


@pytest.mark.parametrize("name,length", [("and", 99), ("or", 169), ("adder2", 341)])
def test_encoding_lengths(name, length):
    C = fixtures()[name]
    assert encoding_length(C.n_gates, C.n_outputs) == length


def test_largest_fixture_encoding():
    assert max(encoding_length(C.n_gates, C.n_outputs) for C in fixtures().values()) == 341


def random_circuit(rng, n_in=None, n_gates=None):
    n_in = n_in if n_in is not None else rng.randint(1, 6)
    n_gates = n_gates if n_gates is not None else rng.randint(0, 12)
    gates = []
    for i in range(n_gates):
        op = rng.choice([AND, XOR, NOT, CONST0, CONST1, AND, XOR])
        lim = n_in + i
        a = rng.randrange(lim) if op in (AND, XOR, NOT) else 0
        b = rng.randrange(lim) if op in (AND, XOR) else 0
        gates.append(Gate(op, a, b))
    outs = tuple(rng.randrange(n_in + n_gates) for _ in range(rng.randint(1, 3)))
    return BooleanCircuit(n_in, tuple(gates), outs)


@given(st.integers(0, 2**32))
def test_text_roundtrip(seed):
    C = random_circuit(random.Random(seed))
    assert parse_circuit(emit_circuit(C)) == C


@given(st.integers(0, 2**32), st.integers(0, 40))
def test_encoding_roundtrip(seed, slack):
    C = random_circuit(random.Random(seed))
    w = encoding_length(C.n_gates, C.n_outputs) + slack
    enc = encode_circuit(C, w)
    assert enc.w == w
    assert decode_circuit(enc) == C


def test_encoding_too_small():
    C = fixtures()["adder2"]
    with pytest.raises(ClassBoundExceeded):
        encode_circuit(C, 340)


@given(st.integers(0, 2**32))
def test_bitsliced_matches_scalar(seed):
    rng = random.Random(seed)
    C = random_circuit(rng)
    table = truth_table(C)
    for v in range(1 << C.n_inputs):
        assert eval_circuit(C, BitVector(v, C.n_inputs)).value == table[v]
    lanes = 7
    xs = [rng.getrandbits(C.n_inputs) for _ in range(lanes)]
    cols = [sum(((x >> i) & 1) << t for t, x in enumerate(xs)) for i in range(C.n_inputs)]
    outs = eval_bitsliced(C, cols, lanes)
    for t, x in enumerate(xs):
        assert [(o >> t) & 1 for o in outs] == eval_circuit(C, BitVector(x, C.n_inputs)).to_bits()


@given(st.integers(0, 2**32))
def test_split_outputs_preserves_each_output(seed):
    C = random_circuit(random.Random(seed))
    parts = split_outputs(C)
    for v in range(1 << C.n_inputs):
        x = BitVector(v, C.n_inputs)
        assert [p(x).value for p in parts] == C(x).to_bits()


def test_out_of_order_definitions_are_sorted():
    text = "in 2\ng1 = NOT g0\ng0 = AND in0 in1\nout g1\n"
    C = parse_circuit(text)
    assert [C(BitVector(v, 2)).value for v in range(4)] == [1, 1, 1, 0]


@pytest.mark.parametrize("text,err", [
    ("g0 = AND in0 in1\nout g0", CircuitSyntaxError),
    ("in 2\ng0 = NAND in0 in1\nout g0", CircuitSyntaxError),
    ("in 2\ng0 = AND in0\nout g0", CircuitSyntaxError),
    ("in 2\nin 3\n", CircuitSyntaxError),
    ("in 2\ng0 = AND in0 in5\nout g0", CircuitStructureError),
    ("in 1\ng0 = AND g1 in0\ng1 = AND g0 in0\nout g1", CircuitStructureError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_circuit(text)


def test_syntax_error_reports_line():
    with pytest.raises(CircuitSyntaxError) as e:
        parse_circuit("in 2\n# comment\nbogus line\n")
    assert e.value.line == 3


def test_decode_rejects_dirty_padding():
    C = fixtures()["and"]
    enc = encode_circuit(C, 120).bits
    with pytest.raises(CircuitStructureError):
        decode_circuit(BitVector(enc.value | 1 << 119, 120))
