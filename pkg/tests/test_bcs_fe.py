import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsfe import bcs_fe as fe
from bsfe.algebra import BitVector
from bsfe.bcsm import BitLedger
from bsfe.circuits import encode_circuit, eval_circuit, fixtures, load_fixture
from bsfe.errors import ClassBoundExceeded, LedgerViolation, ParameterError
from bsfe.harness import ExperimentSpec, run_forgetting

N = max(64, max(fe._min_n(C) for C in fixtures().values()))


def test_min_n_for_adder():
    assert fe._min_n(load_fixture("adder2")) == 342 == N


def roundtrip(C, mu, rng, n=N):
    p = fe.BcsParams(n)
    ms, dist = fe.bcsfe_keygen(n, rng, p)
    a, b = ms.stream.tee(2)
    ek, fk = BitLedger("enc", p.ek_budget), BitLedger("key", p.fk_budget(1))
    k = fe.bcsfe_ek_receive(a, p, rng, ek)
    sk_C = fe.bcsfe_fk_receive(b, p, C, fk)
    sk = fe.secret_key(dist)
    y = fe.bcsfe_dec(sk_C, C, fe.bcsfe_enc(k, mu, p), p)
    z = fe.bcsfe_dec(sk.sk, fe.identity_tag(p), fe.bcsfe_enc(k, mu, p), p)
    return p, y, z, ms.distributor_ledger, ek, fk


@pytest.mark.parametrize("name", sorted(fixtures()))
def test_both_branches(name):
    C = fixtures()[name]
    rng = random.Random(name)
    mu = BitVector.random(C.n_inputs, rng)
    p, y, z, dl, ek, fk = roundtrip(C, mu, rng)
    assert y == eval_circuit(C, mu) and z == mu
    assert dl.ok and ek.ok and fk.ok
    assert dl.peak <= 5 * p.n + 3 and dl.peak <= 4 * p.n + 2


def test_wrong_key_for_tag_fails():
    rng = random.Random(3)
    C = load_fixture("and")
    p = fe.BcsParams(N)
    ms, dist = fe.bcsfe_keygen(N, rng, p)
    a, b = ms.stream.tee(2)
    k = fe.bcsfe_ek_receive(a, p, rng)
    sk_C = fe.bcsfe_fk_receive(b, p, C)
    other = fe.circuit_tag(p, load_fixture("or"))
    assert fe.bcsfe_dec(sk_C, other, fe.bcsfe_enc(k, BitVector(1, 2), p), p) is None


def test_tight_encryptor_budget_violates():
    rng = random.Random(0)
    p = fe.BcsParams(64)
    ms, _ = fe.bcsfe_keygen(64, rng, p)
    with pytest.raises(LedgerViolation):
        fe.bcsfe_ek_receive(ms.stream, p, rng, BitLedger("enc", p.row_bits))


def test_identity_tag_is_all_ones():
    p = fe.BcsParams(40)
    t = fe.identity_tag(p)
    assert t.length == p.tag_bits and t.value == (1 << p.tag_bits) - 1


@given(st.integers(0, 2**32))
def test_circuit_tag_applies(seed):
    rng = random.Random(seed)
    name = rng.choice(sorted(fixtures()))
    C = fixtures()[name]
    p = fe.BcsParams(N)
    mu = BitVector.random(C.n_inputs, rng)
    assert fe.apply_tag(p, fe.circuit_tag(p, C), mu) == eval_circuit(C, mu)


def test_eval_at_tag_applies_to_encodings():
    p = fe.BcsParams(N)
    C = load_fixture("majority")
    mu = encode_circuit(C, p.enc_width).bits
    for v in range(8):
        x = BitVector(v, 3)
        assert fe.apply_tag(p, fe.eval_at_tag(p, x), mu) == eval_circuit(C, x)


def test_malformed_tags_rejected():
    p = fe.BcsParams(N)
    assert fe.apply_tag(p, BitVector(3, p.tag_bits), BitVector(0, 2)) is None
    assert fe.apply_tag(p, fe.circuit_tag(p, load_fixture("and")), BitVector(0, 3)) is None
    assert fe.apply_tag(p, fe.eval_at_tag(p, BitVector(1, 2)), BitVector(0, p.enc_width)) is None


def test_tags_must_fit():
    with pytest.raises(ClassBoundExceeded):
        fe.circuit_tag(fe.BcsParams(40), load_fixture("adder2"))
    with pytest.raises(ClassBoundExceeded):
        fe.eval_at_tag(fe.BcsParams(10), BitVector(0, 8))


def test_params_validated():
    with pytest.raises(ParameterError):
        fe.BcsParams(1)
    with pytest.raises(ParameterError):
        fe.BcsParams(10, ell=10)
    p = fe.BcsParams(10)
    assert p.adversary_memory == 100 and p.stream_bits == 11 * 21 + 11


@pytest.mark.parametrize("name", ["and", "mux", "adder2"])
def test_obfuscation_from_fe(name):
    C = fixtures()[name]
    rng = random.Random(name)
    xs = [BitVector(v, C.n_inputs) for v in range(1 << C.n_inputs)]
    obf = fe.wgb_from_fe_obfuscate(C, rng, query_budget=len(xs))
    assert fe.wgb_from_fe_eval(obf, xs) == [eval_circuit(C, x) for x in xs]


def test_obfuscation_single_input():
    C = load_fixture("xor")
    obf = fe.wgb_from_fe_obfuscate(C, random.Random(1))
    assert fe.wgb_from_fe_eval(obf, BitVector(1, 2)) == BitVector(1, 1)


def test_forgetting_small():
    pre = run_forgetting(ExperimentSpec("bcs-forget", "prefix", 50, 1))
    full = run_forgetting(ExperimentSpec("bcs-forget", "full", 50, 1))
    assert pre.successes == 0 and full.successes == 50
