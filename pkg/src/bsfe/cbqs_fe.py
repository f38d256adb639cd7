"""Functional encryption with classical keys from signatures.

A functional key is a circuit plus a signature on its encoding.  A
ciphertext for message ``mu`` is a one-time program of

    P(C_enc, sig) = C(mu) if sig verifies on C_enc under pk else bottom

realised as a garbled universal evaluator over a fixed circuit class.
The program circuit is built once per parameter set with ``pk`` and
``mu`` as sender-side inputs, so each encryption only re-garbles it.
Outputs are ``(value, valid)``; ``valid = 0`` decodes to ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import signatures as sig
from .algebra import BitVector
from .builder import CircuitBuilder, CircuitClass, universal_eval
from .channel import MemoryLedger
from .circuits import BooleanCircuit
from .errors import ShapeError
from .otp import OtpTransmission, otp_yao_receive, otp_yao_send
from .transcript import Transcript


@dataclass(frozen=True)
class CbqsParams:
    cls: CircuitClass = CircuitClass(4, 8, 1)
    lam: int = 16          # signature digest bits
    max_sigs: int = 2
    s: int = 16
    ell: int = 8           # garbled label length

    @property
    def sig(self) -> sig.SigParams:
        return sig.SigParams(self.lam, self.max_sigs)

    @property
    def input_bits(self) -> int:
        """Evaluator inputs of the one-time program: encoding then signature."""
        return self.cls.w + self.sig.sig_bits


@dataclass(frozen=True)
class CbqsKeys:
    mk: sig.SigKeyPair
    pk: sig.VerifyKey
    params: CbqsParams


@dataclass(frozen=True)
class CbqsFuncKey:
    C: BooleanCircuit
    sigma: sig.Signature


@dataclass
class CbqsCiphertext:
    transmission: OtpTransmission
    params: CbqsParams


@lru_cache(maxsize=None)
def program_circuit(params: CbqsParams) -> BooleanCircuit:
    """Inputs: C_enc (w), signature, verify key, message (n)."""
    cls, sp = params.cls, params.sig
    n = cls.w + sp.sig_bits + sp.vk_bits + cls.n_inputs
    b = CircuitBuilder(n)
    enc = b.inputs(0, cls.w)
    sg = b.inputs(cls.w, sp.sig_bits)
    vk = b.inputs(cls.w + sp.sig_bits, sp.vk_bits)
    mu = b.inputs(cls.w + sp.sig_bits + sp.vk_bits, cls.n_inputs)
    valid = sig.verify_wires(b, sp, enc, sg, vk)
    outs = universal_eval(b, cls, enc, mu)
    return b.build([b.AND(o, valid) for o in outs] + [valid])


def cbqsfe_setup(lam: int, rng, params: CbqsParams | None = None) -> CbqsKeys:
    params = params or CbqsParams(lam=lam)
    if params.lam != lam:
        params = CbqsParams(params.cls, lam, params.max_sigs, params.s, params.ell)
    kp = sig.sig_keygen(lam, params.max_sigs, rng)
    return CbqsKeys(kp, kp.vk, params)


def cbqsfe_keygen(keys: CbqsKeys, C: BooleanCircuit) -> CbqsFuncKey:
    enc = keys.params.cls.encode(C)
    return CbqsFuncKey(C, sig.sign(keys.mk, enc.bits))


def cbqsfe_enc(pk: sig.VerifyKey, mu: BitVector, s: int, rng, params: CbqsParams,
               transcript: Transcript | None = None) -> CbqsCiphertext:
    if mu.length != params.cls.n_inputs:
        raise ShapeError(f"message must have {params.cls.n_inputs} bits")
    if s != params.s:
        params = CbqsParams(params.cls, params.lam, params.max_sigs, s, params.ell)
    P = program_circuit(CbqsParams(params.cls, params.lam, params.max_sigs))
    t = otp_yao_send(P, s, params.ell, rng, fixed=pk.to_bits() + mu, transcript=transcript)
    return CbqsCiphertext(t, params)


def key_input(params: CbqsParams, C: BooleanCircuit, sigma: sig.Signature) -> BitVector:
    return params.cls.encode(C).bits + sigma.to_bits(params.sig)


def decode_output(y: BitVector):
    n = y.length - 1
    return y[:n] if y[n] else None


def cbqsfe_dec(sk_C: CbqsFuncKey, ct: CbqsCiphertext, rng, ledger: MemoryLedger | None = None,
               transcript: Transcript | None = None):
    """C(mu), or None when the key does not verify."""
    y = otp_yao_receive(ct.transmission, key_input(ct.params, sk_C.C, sk_C.sigma), rng,
                        ledger, transcript)
    return decode_output(y)
