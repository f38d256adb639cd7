"""Streaming functional encryption in the bounded classical storage model,
and obfuscation built from it.

Master key stream: rows ``x_0 .. x_n`` of ``2n+1`` random bits, then a
selector ``v_I`` of ``n+1`` bits.  ``M_x`` is the matrix with row ``i`` equal
to ``x_i``.

* the distributor keeps ``sk = v_I M_x`` (a running XOR of rows)
* an encryptor samples ``V`` ((2n+1) x lam) and folds ``W = M_x V``
* a functional key for tag ``c`` (n+1 bits) is ``c M_x``

A ciphertext is an obfuscated program ``P(y, c)``:

* ``y V = c W``: output ``f_c(mu)``
* ``c`` is the identity tag and ``y V = v_I W``: output ``mu``
* otherwise ``None``

Tags: two kind bits, then a payload.  Kind 0 carries a circuit encoding,
kind 1 carries an input ``x`` (16-bit length, then bits) and means
"evaluate the circuit encoded in ``mu`` on ``x``".  All ones is the
identity tag.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import BitMatrix, BitVector, vec_mat_mul
from .bcsm import BitLedger, RowReader, Stream, WgbHandle, wgb_eval, wgb_obfuscate
from .circuits import BooleanCircuit, CircuitEncoding, decode_circuit, encode_circuit
from .errors import ClassBoundExceeded, CircuitStructureError, ParameterError, ShapeError
from .transcript import Transcript

KIND_BITS = 2
KIND_CIRCUIT, KIND_EVAL_AT = 0, 1
LEN_BITS = 16


@dataclass(frozen=True)
class BcsParams:
    n: int
    lam: int = 16
    ell: int = 0          # circuit encoding width; 0 means "as large as fits"
    m: int | None = None  # adversary memory, default n^2

    def __post_init__(self):
        if self.n < 2 or self.lam < 1:
            raise ParameterError("need n >= 2 and lambda >= 1")
        if self.ell and not self.ell < self.n:
            raise ParameterError(f"encoding length {self.ell} must be < n = {self.n}")

    @property
    def row_bits(self) -> int:
        return 2 * self.n + 1

    @property
    def tag_bits(self) -> int:
        return self.n + 1

    @property
    def enc_width(self) -> int:
        return self.ell or self.tag_bits - KIND_BITS

    @property
    def adversary_memory(self) -> int:
        return self.m if self.m is not None else self.n * self.n

    @property
    def stream_bits(self) -> int:
        return (self.n + 1) * self.row_bits + self.tag_bits

    # honest memory, in bits, for each role
    @property
    def distributor_budget(self) -> int:
        # sk and v_I are held throughout; one generated piece is in flight
        return self.row_bits + self.tag_bits + self.row_bits

    @property
    def ek_budget(self) -> int:
        # V, W, a partial row, and v_I at the end
        return (self.row_bits + self.tag_bits) * self.lam + self.row_bits + self.tag_bits

    def fk_budget(self, keys: int = 1) -> int:
        # one accumulator and one tag per key, plus a partial row
        return keys * (self.row_bits + self.tag_bits) + self.row_bits


# -- tags --------------------------------------------------------------------

def identity_tag(p: BcsParams) -> BitVector:
    return BitVector((1 << p.tag_bits) - 1, p.tag_bits)


def circuit_tag(p: BcsParams, C: BooleanCircuit) -> BitVector:
    enc = encode_circuit(C, p.enc_width).bits
    if KIND_BITS + enc.length > p.tag_bits:
        raise ClassBoundExceeded(f"{enc.length}-bit encoding does not fit a {p.tag_bits}-bit tag")
    return BitVector(KIND_CIRCUIT, KIND_BITS) + enc.pad(p.tag_bits - KIND_BITS)


def eval_at_tag(p: BcsParams, x: BitVector) -> BitVector:
    body = BitVector(x.length, LEN_BITS) + x
    if KIND_BITS + body.length > p.tag_bits:
        raise ClassBoundExceeded(f"{x.length}-bit input does not fit a {p.tag_bits}-bit tag")
    return BitVector(KIND_EVAL_AT, KIND_BITS) + body.pad(p.tag_bits - KIND_BITS)


def apply_tag(p: BcsParams, c: BitVector, mu: BitVector) -> BitVector | None:
    """f_c(mu), or None when the tag does not describe a usable function."""
    kind, body = c[:KIND_BITS].value, c[KIND_BITS:]
    try:
        if kind == KIND_CIRCUIT:
            C = decode_circuit(CircuitEncoding(body[: p.enc_width]))
            if body[p.enc_width:].value or C.n_inputs != mu.length:
                return None
            return C(mu)
        if kind == KIND_EVAL_AT:
            k = body[:LEN_BITS].value
            if LEN_BITS + k > body.length or body[LEN_BITS + k:].value:
                return None
            x = body[LEN_BITS: LEN_BITS + k]
            C = decode_circuit(CircuitEncoding(mu))
            return C(x) if C.n_inputs == k else None
    except (CircuitStructureError, ValueError):
        return None
    return None


# -- keys ----------------------------------------------------------------------

@dataclass
class BcsMasterStream:
    params: BcsParams
    stream: Stream
    distributor_ledger: BitLedger


@dataclass(frozen=True)
class BcsSecretKey:
    sk: BitVector
    v_I: BitVector


@dataclass(frozen=True)
class BcsEncKey:
    W: BitMatrix     # (n+1) x lam
    V: BitMatrix     # (2n+1) x lam
    v_I: BitVector


class _Distributor:
    """Generates the master stream lazily; remembers only sk and v_I."""

    def __init__(self, p: BcsParams, rng, ledger: BitLedger, piece: int):
        self.p, self.rng, self.ledger, self.piece = p, rng, ledger, piece
        self.v_I = BitVector.random(p.tag_bits, rng)
        self.sk = 0
        self.done = False

    def words(self):
        p = self.p
        for i in range(p.n + 1):
            take_row = self.v_I[i]
            pos = 0
            while pos < p.row_bits:
                k = min(self.piece, p.row_bits - pos)
                bits = self.rng.getrandbits(k)
                self.ledger.carry(p.row_bits + p.tag_bits + k, where="distribute")
                if take_row:
                    self.sk ^= bits << pos
                pos += k
                yield BitVector(bits, k)
        self.ledger.carry(p.row_bits + p.tag_bits, where="distribute")
        yield self.v_I
        self.done = True


def bcsfe_keygen(n: int, rng, params: BcsParams | None = None, transcript: Transcript | None = None,
                 piece_bits: int = 64):
    """Master stream and a lazily completed secret key.

    The key's value is fixed by the time the stream is fully consumed;
    :func:`secret_key` reads it.
    """
    p = params or BcsParams(n)
    ledger = BitLedger("distributor", p.distributor_budget, transcript=transcript)
    dist = _Distributor(p, rng, ledger, piece_bits)
    stream = Stream.from_words(dist.words(), p.stream_bits, transcript=transcript, label="master")
    return BcsMasterStream(p, stream, ledger), dist


def secret_key(dist: _Distributor) -> BcsSecretKey:
    if not dist.done:
        raise ParameterError("the master stream has not been fully sent")
    return BcsSecretKey(BitVector(dist.sk, dist.p.row_bits), dist.v_I)


def _fold_rows(stream: Stream, p: BcsParams, on_row, ledger: BitLedger | None, held_bits: int):
    """Feed each complete row to ``on_row(i, value)``; return the trailing v_I."""
    reader = RowReader(p.row_bits)
    i = 0
    tail, ntail = 0, 0
    for value, nbits in stream:
        if i <= p.n:
            rows = reader.feed(value, nbits)
            for r in rows:
                if i <= p.n:
                    on_row(i, r)
                    i += 1
            if i > p.n:
                # anything left in the reader belongs to v_I
                tail, ntail = reader.buf, reader.nbuf
                reader.buf = reader.nbuf = 0
        else:
            tail |= value << ntail
            ntail += nbits
        if ledger is not None:
            ledger.carry(held_bits + reader.carried_bits + ntail)
    if i != p.n + 1 or ntail != p.tag_bits:
        raise ShapeError("truncated master stream")
    return BitVector(tail, p.tag_bits)


def bcsfe_ek_receive(ms: Stream, p: BcsParams, rng, ledger: BitLedger | None = None) -> BcsEncKey:
    V = BitMatrix.random(p.row_bits, p.lam, rng)
    W = [0] * (p.n + 1)
    held = (p.row_bits + p.tag_bits) * p.lam

    def on_row(i, r):
        W[i] = vec_mat_mul(BitVector(r, p.row_bits), V).value

    v_I = _fold_rows(ms, p, on_row, ledger, held)
    return BcsEncKey(BitMatrix(p.n + 1, p.lam, tuple(W)), V, v_I)


def bcsfe_fk_receive_many(ms: Stream, p: BcsParams, tags, ledger: BitLedger | None = None) -> list[BitVector]:
    """Functional keys for several tags in one pass over the stream."""
    tags = list(tags)
    for c in tags:
        if c.length != p.tag_bits:
            raise ShapeError(f"tag must have {p.tag_bits} bits")
    acc = [0] * len(tags)
    held = len(tags) * (p.row_bits + p.tag_bits)

    def on_row(i, r):
        for k, c in enumerate(tags):
            if c[i]:
                acc[k] ^= r

    _fold_rows(ms, p, on_row, ledger, held)
    return [BitVector(a, p.row_bits) for a in acc]


def bcsfe_fk_receive(ms: Stream, p: BcsParams, C, ledger: BitLedger | None = None) -> BitVector:
    """``c M_x`` for a circuit or a raw (n+1)-bit tag."""
    c = C if isinstance(C, BitVector) else circuit_tag(p, C)
    return bcsfe_fk_receive_many(ms, p, [c], ledger)[0]


# -- encryption ----------------------------------------------------------------

def fe_program(p: BcsParams, k: BcsEncKey, mu: BitVector):
    """The hidden program; input is ``(y, c)``."""
    ident = identity_tag(p)

    def P(inp):
        y, c = inp
        if y.length != p.row_bits or c.length != p.tag_bits:
            return None
        yV = vec_mat_mul(y, k.V)
        if c == ident:
            return mu if yV == vec_mat_mul(k.v_I, k.W) else None
        if yV != vec_mat_mul(c, k.W):
            return None
        return apply_tag(p, c, mu)

    return P


@dataclass
class BcsCiphertext:
    stream: Stream
    handle: WgbHandle


def bcsfe_enc(k: BcsEncKey, mu: BitVector, p: BcsParams, transcript: Transcript | None = None,
              query_budget: int | None = None) -> BcsCiphertext:
    stream, h = wgb_obfuscate(fe_program(p, k, mu), p.n, p.adversary_memory, p.lam,
                              query_budget=query_budget, transcript=transcript)
    return BcsCiphertext(stream, h)


def receive_ciphertext(ct: BcsCiphertext, ledger: BitLedger | None = None) -> None:
    """Consume the ciphertext stream; the ideal oracle needs nothing from it."""
    if not ct.stream.consumed:
        for _ in ct.stream:
            if ledger is not None:
                ledger.carry(0)


def bcsfe_dec(sk_C: BitVector, c, ct: BcsCiphertext, p: BcsParams,
              ledger: BitLedger | None = None) -> BitVector | None:
    tag = c if isinstance(c, BitVector) else circuit_tag(p, c)
    receive_ciphertext(ct, ledger)
    return wgb_eval(ct.handle, (sk_C, tag))


# -- obfuscation from functional encryption --------------------------------------

@dataclass
class WgbFromFe:
    params: BcsParams
    master: Stream
    ciphertext: BcsCiphertext
    n_inputs: int


def wgb_from_fe_obfuscate(C: BooleanCircuit, rng, params: BcsParams | None = None,
                          transcript: Transcript | None = None, query_budget: int | None = None,
                          ledger: BitLedger | None = None) -> WgbFromFe:
    """Master stream plus an encryption of C's encoding.

    The obfuscator runs the encryption-key fold itself on its copy of the
    stream; the evaluator gets the other copy.
    """
    p = params or BcsParams(max(64, _min_n(C)))
    ms, _ = bcsfe_keygen(p.n, rng, p, transcript)
    own, out = ms.stream.tee(2)
    k = bcsfe_ek_receive(own, p, rng, ledger)
    mu = encode_circuit(C, p.enc_width).bits
    ct = bcsfe_enc(k, mu, p, transcript, query_budget)
    return WgbFromFe(p, out, ct, C.n_inputs)


def _min_n(C: BooleanCircuit) -> int:
    from .circuits import encoding_length

    return max(encoding_length(C.n_gates, C.n_outputs), KIND_BITS + LEN_BITS + C.n_inputs) + 1


def wgb_from_fe_eval(obf: WgbFromFe, xs, ledger: BitLedger | None = None):
    """C(x) for one input or a list of inputs, from a single stream pass."""
    single = isinstance(xs, BitVector)
    xs = [xs] if single else list(xs)
    p = obf.params
    tags = [eval_at_tag(p, x) for x in xs]
    keys = bcsfe_fk_receive_many(obf.master, p, tags, ledger)
    out = [bcsfe_dec(y, c, obf.ciphertext, p) for y, c in zip(keys, tags)]
    return out[0] if single else out
