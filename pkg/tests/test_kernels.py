import os
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe import kernels
from bsfe.circuits import fixtures
from bsfe.garble import _fresh_labels

PY = kernels.python_backend()
COMPILED = kernels.compiled_backend()
BACKENDS = [PY] + ([COMPILED] if COMPILED is not None else [])
needs_compiled = pytest.mark.skipif(COMPILED is None, reason="extension not built")

KEY = (0x0706050403020100, 0x0F0E0D0C0B0A0908)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
@pytest.mark.parametrize("n,expected", [
    # reference SipHash-2-4 vectors: key 00..0f, message 00..(n-1)
    (0, 0x726FDB47DD0E0E31),
    (1, 0x74F839C593DC67FD),
    (8, 0x93F5F5799A932462),
    (15, 0xA129CA6149BE45E5),
])
def test_siphash_reference_vectors(impl, n, expected):
    assert impl.siphash24(*KEY, bytes(range(n))) == expected


def test_backend_is_selected():
    assert kernels.BACKEND in ("python", "cython")
    forced = os.environ.get("BSFE_PURE_PYTHON", "") not in ("", "0")
    if forced or COMPILED is None:
        assert kernels.BACKEND == PY.BACKEND
    else:
        assert kernels.BACKEND == COMPILED.BACKEND


@needs_compiled
@given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1), st.lists(st.integers(0, 2**64 - 1), min_size=4,
                                                                          max_size=4), st.integers(0, 2**20))
def test_prf_parity(k0, k1, words, gate):
    assert PY.prf_word(k0, k1, *words, gate, 3) == COMPILED.prf_word(k0, k1, *words, gate, 3)


@needs_compiled
@given(st.integers(1, 32), st.data())
def test_gf_mul_parity(deg, data):
    mod = (1 << deg) | data.draw(st.integers(0, (1 << deg) - 1)) | 1
    a, b = (data.draw(st.integers(0, (1 << deg) - 1)) for _ in range(2))
    assert PY.gf_mul_small(a, b, mod, deg) == COMPILED.gf_mul_small(a, b, mod, deg)


@needs_compiled
@given(st.integers(0, 2**200), st.integers(0, 2**200), st.integers(1, 200))
def test_compress_parity(x, mask, n):
    mask &= (1 << n) - 1
    assert PY.compress_bits(x, mask, n) == COMPILED.compress_bits(x, mask, n)


@needs_compiled
@given(st.integers(1, 20), st.integers(1, 90), st.one_of(st.integers(1, 12), st.sampled_from([63, 64, 65, 80])),
       st.integers(0, 2**32))
def test_toeplitz_parity(T, m, ell, seed):
    g = np.random.default_rng(seed)
    x = g.integers(0, 2, (T, m), dtype=np.uint8)
    mask = g.integers(0, 2, (T, m), dtype=np.uint8).astype(bool)
    seeds = g.integers(0, 2, (T, m + ell - 1), dtype=np.uint8)
    assert (PY.toeplitz_rows(x, mask, seeds, ell) == COMPILED.toeplitz_rows(x, mask, seeds, ell)).all()


@needs_compiled
@pytest.mark.parametrize("label_bits", [8, 64, 128])
@pytest.mark.parametrize("name", ["adder2", "mux", "const", "not"])
def test_garble_and_eval_parity(name, label_bits):
    C = fixtures()[name]
    g = np.random.default_rng(11)
    labels = _fresh_labels(C.n_wires, label_bits, g)
    ops, a, b = C.arrays
    lab_py, lab_c = labels.copy(), labels.copy()
    t_py = PY.garble_tables(ops, a, b, C.n_inputs, lab_py, label_bits, 32, 123, 456)
    t_c = COMPILED.garble_tables(ops, a, b, C.n_inputs, lab_c, label_bits, 32, 123, 456)
    assert np.array_equal(t_py, t_c) and np.array_equal(lab_py, lab_c)
    labels = lab_c
    x = random.Random(1).getrandbits(C.n_inputs)
    for impl in (PY, COMPILED):
        active = np.zeros((C.n_wires, 2), dtype=np.uint64)
        for i in range(C.n_inputs):
            active[i] = labels[i, (x >> i) & 1]
        const = np.zeros((C.n_gates, 2), dtype=np.uint64)
        for gi, op in enumerate(ops):
            if op >= kernels.OP_CONST0:
                const[gi] = labels[C.n_inputs + gi, op - kernels.OP_CONST0]
        impl.eval_garbled(ops, a, b, C.n_inputs, t_c, const, active, label_bits, 32, 123, 456)
        if impl is PY:
            ref = active.copy()
        else:
            assert np.array_equal(ref, active)
