"""Security experiments: adversary strategies, Monte-Carlo drivers and
binomial statistics.

Every experiment is a pure function of its :class:`ExperimentSpec`.
Trials draw from substreams keyed by (seed, scenario, strategy, index),
so results replay exactly and do not depend on evaluation order.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import ot
from .algebra import BitVector
from .bcs_fe import BcsParams, bcsfe_fk_receive, bcsfe_keygen
from .bcsm import BitLedger
from .cbqs_fe import CbqsParams, cbqsfe_enc, cbqsfe_keygen, cbqsfe_setup, decode_output, key_input
from .channel import Decisions, MemoryLedger, transmit
from .circuits import BooleanCircuit
from .errors import InvalidLabels, ParameterError
from .garble import WireLabel, geval
from .rng import np_generator, substream
from .signatures import sign


@dataclass(frozen=True)
class ExperimentSpec:
    scenario: str
    strategy: str
    trials: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")

    def param(self, key, default):
        return self.params.get(key, default)


@dataclass
class ExperimentResult:
    scenario: str
    strategy: str
    successes: int
    trials: int
    estimate: float
    ci_low: float
    ci_high: float
    violations: int = 0
    honest_violations: int = 0
    extra: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return asdict(self)


def wilson(successes: int, trials: int, alpha: float = 0.05) -> tuple[float, float]:
    from statsmodels.stats.proportion import proportion_confint

    lo, hi = proportion_confint(successes, trials, alpha=alpha, method="wilson")
    p = successes / trials
    # clamp float noise at the edges so the interval always holds the estimate
    return max(0.0, min(float(lo), p)), min(1.0, max(float(hi), p))


def make_result(spec: ExperimentSpec, successes: int, trials: int | None = None, **kw) -> ExperimentResult:
    n = trials if trials is not None else spec.trials
    lo, hi = wilson(successes, n)
    return ExperimentResult(spec.scenario, spec.strategy, int(successes), n, successes / n, lo, hi, **kw)


def _trial_rng(spec: ExperimentSpec, *labels) -> random.Random:
    return substream(spec.seed, spec.scenario, spec.strategy, *labels)


# ===========================================================================
# OT sender security
# ===========================================================================

class OtAdversary:
    """Receiver-side strategy.  ``decide`` picks per-qubit actions before the
    bound; ``guess`` sees the announcement and returns (declared branch,
    guessed bits of the other branch)."""

    stores = 0

    def decide(self, shape, info, gen) -> Decisions:
        raise NotImplementedError

    def guess(self, out, ann: ot.BatchAnnouncement, gen):
        raise NotImplementedError


def _hash_guess(bits, ann, target):
    """e_target xor f_target(bits restricted to I_target), row-wise."""
    T = bits.shape[0]
    tgt = np.broadcast_to(np.asarray(target, dtype=np.uint8), (T,))
    mask = ann.theta == tgt[:, None]
    seeds = np.where(tgt[:, None] == 1, ann.seeds1, ann.seeds0)
    return ot.toeplitz_masked(bits, mask, seeds, ann.ell) ^ np.where(tgt[:, None] == 1, ann.e1, ann.e0)


class HonestReceiver(OtAdversary):
    """Measures everything in its random choice basis, then tries the other branch."""

    def decide(self, shape, info, gen):
        self.c = gen.integers(0, 2, size=shape[0], dtype=np.uint8)
        return Decisions.measure_all(shape, np.repeat(self.c[:, None], shape[1], axis=1))

    def guess(self, out, ann, gen):
        return self.c, _hash_guess(out.bits, ann, self.c ^ 1)


class FixedBasis(OtAdversary):
    """No storage; every qubit measured in one basis."""

    def __init__(self, basis: int = 0):
        self.basis = basis

    def decide(self, shape, info, gen):
        return Decisions.measure_all(shape, self.basis)

    def guess(self, out, ann, gen):
        T = out.bits.shape[0]
        return np.full(T, self.basis, dtype=np.uint8), _hash_guess(out.bits, ann, 1 - self.basis)


class RandomBases(OtAdversary):
    """No storage; independent random basis per qubit.  Targets whichever
    branch it happened to measure more of correctly."""

    def decide(self, shape, info, gen):
        return Decisions.measure_all(shape, gen.integers(0, 2, size=shape, dtype=np.uint8))

    def guess(self, out, ann, gen):
        right = out.bases == ann.theta
        known1 = (right & (ann.theta == 1)).sum(axis=1)
        known0 = (right & (ann.theta == 0)).sum(axis=1)
        target = (known1 > known0).astype(np.uint8)
        return target ^ 1, _hash_guess(out.bits, ann, target)


class StoreThenMeasure(OtAdversary):
    """Keeps ``k`` qubits per run, measures the rest in the + basis, and
    measures the kept ones in the announced bases after the bound."""

    def __init__(self, k: int):
        self.k = k
        self.stores = k

    def decide(self, shape, info, gen):
        store = np.zeros(shape, dtype=bool)
        store[:, : self.k] = True
        return Decisions(np.zeros(shape, dtype=np.uint8), ~store, store)

    def guess(self, out, ann, gen):
        bits = out.bits.copy()
        if out.stored is not None:
            late = out.stored.measure(ann.theta, gen)
            bits = np.where(out.stored.mask, late, bits)
        T = bits.shape[0]
        return np.zeros(T, dtype=np.uint8), _hash_guess(bits, ann, np.ones(T, dtype=np.uint8))


OT_STRATEGIES: dict[str, Callable[[dict], OtAdversary]] = {
    "honest": lambda p: HonestReceiver(),
    "fixed-basis": lambda p: FixedBasis(0),
    "random-basis": lambda p: RandomBases(),
    "s-storage": lambda p: StoreThenMeasure(p["s"]),
    "full-storage": lambda p: StoreThenMeasure(p["m"]),
}


def register_ot_strategy(name: str, factory: Callable[[dict], OtAdversary]) -> None:
    OT_STRATEGIES[name] = factory


def run_ot_sender_security(spec: ExperimentSpec) -> ExperimentResult:
    """Rate at which the adversary outputs the branch it did not declare.

    Params: ``l`` (8), ``s`` (32), ``m`` (16l + 8s), ``enforce`` (True),
    ``batch`` (10000).  With ``enforce`` the adversary's stored qubits may
    not exceed ``s`` at the bound.
    """
    ell = spec.param("l", 8)
    s = spec.param("s", 32)
    m = spec.param("m", ot.required_qubits(ell, s))
    enforce = spec.param("enforce", True)
    batch = spec.param("batch", 10000)
    params = {"l": ell, "s": s, "m": m}
    adv = OT_STRATEGIES[spec.strategy](params)
    ledger = MemoryLedger("adversary", s, enforce=enforce)
    wins = chosen = done = 0
    block = 0
    while done < spec.trials:
        T = min(batch, spec.trials - done)
        rng = _trial_rng(spec, "block", block)
        send_gen, adv_gen = np_generator(rng), np_generator(rng)
        s0 = send_gen.integers(0, 2, size=(T, ell), dtype=np.uint8)
        s1 = send_gen.integers(0, 2, size=(T, ell), dtype=np.uint8)
        msg, deferred = ot.send_batch(s0, s1, m, send_gen)
        out = transmit(msg, adv, ledger, adv_gen, info={"m": m, "l": ell})
        ann = deferred.reveal()
        declared, guess = adv.guess(out, ann, adv_gen)
        other = np.where(declared[:, None] == 1, s0, s1)
        mine = np.where(declared[:, None] == 1, s1, s0)
        wins += int((guess == other).all(axis=1).sum())
        if isinstance(adv, HonestReceiver):
            chosen += int((_hash_guess(out.bits, ann, declared) == mine).all(axis=1).sum())
        done += T
        block += 1
    extra = {"l": ell, "s": s, "m": m, "enforce": enforce, "params_ok": ot.params_ok(m, ell, s),
             "bound": 2 * 2.0 ** -ell}
    if isinstance(adv, HonestReceiver):
        extra["chosen_branch_rate"] = chosen / spec.trials
    return make_result(spec, wins, violations=len(ledger.violations), extra=extra)


# ===========================================================================
# CBQS-FE indistinguishability game
# ===========================================================================

def _bit_circuit(n: int, i: int) -> BooleanCircuit:
    """The projection onto input bit i (no gates)."""
    return BooleanCircuit(n, (), (i,))


class IndAdversary:
    """Chooses messages (with key queries), acts on the ciphertext's
    qubits, then guesses ``b`` with or without the revealed signing key."""

    name = "base"

    def choose(self, pk, keygen, params: CbqsParams, rng):
        raise NotImplementedError

    def decide(self, shape, info, gen) -> Decisions:
        return Decisions.discard_all(shape)

    def process(self, out, ct, ann, gen) -> None:
        pass

    def guess(self, sk, rng) -> int:
        return rng.getrandbits(1)


def _distinct_messages(n, rng):
    m0 = rng.getrandbits(n)
    m1 = m0 ^ (1 << rng.randrange(n))
    return BitVector(m0, n), BitVector(m1, n)


class GuessAdversary(IndAdversary):
    """Ignores the ciphertext."""

    def choose(self, pk, keygen, params, rng):
        self.m = _distinct_messages(params.cls.n_inputs, rng)
        return self.m


class _Evaluator(IndAdversary):
    """Measures in the bases an honest evaluator on input ``x`` would use,
    optionally storing the first ``store`` qubits instead."""

    store = 0

    def _set_input(self, x: BitVector, m_ot: int):
        self.x = x
        self.m_ot = m_ot

    def decide(self, shape, info, gen):
        m = info["m"]
        choice = np.array(self.x.to_bits(), dtype=np.uint8)
        bases = np.repeat(choice, m)[None, :]
        store = np.zeros(shape, dtype=bool)
        store[:, : self.store] = True
        return Decisions(np.broadcast_to(bases, shape).copy(), ~store, store)

    def process(self, out, ct, ann, gen):
        t = ct.transmission
        bits = out.bits.reshape(t.n_free, t.m)
        choices = np.array(self.x.to_bits(), dtype=np.uint8)
        labels = ot.pack_rows(ot.decode_batch(choices, bits, ann))
        self.result = None
        try:
            y = geval(t.garbled, [WireLabel(v, t.ell) for v in labels] + list(t.fixed_labels))
            self.result = decode_output(y)
        except InvalidLabels:
            pass


class HonestKeyAdversary(_Evaluator):
    """Queries a circuit that agrees on both messages and decrypts with it."""

    def choose(self, pk, keygen, params, rng):
        n = params.cls.n_inputs
        m0, m1 = _distinct_messages(n, rng)
        diff = (m0.value ^ m1.value).bit_length() - 1
        j = next(i for i in range(n) if i != diff)
        C = _bit_circuit(n, j)
        self.C, self.m = C, (m0, m1)
        self.key = keygen(C)
        self._set_input(key_input(params, self.key.C, self.key.sigma), 0)
        return m0, m1

    def guess(self, sk, rng):
        if self.result is None:
            return rng.getrandbits(1)
        # the output is the same under both messages; use it as the guess anyway
        return self.result.value & 1


class StoreAdversary(HonestKeyAdversary):
    """The honest-key adversary that also keeps ``s`` qubits past the bound
    and measures them in the announced bases."""

    def __init__(self, s: int):
        self.store = s

    def process(self, out, ct, ann, gen):
        if out.stored is not None:
            late = out.stored.measure(ann.theta.reshape(1, -1), gen)
            out.bits = np.where(out.stored.mask, late, out.bits)
        super().process(out, ct, ann, gen)


class ForgeAfterReveal(_Evaluator):
    """Targets a distinguishing circuit it never queries.  Before the bound
    it measures the encoding part in the right bases and the signature part
    at random; once the signing key is revealed it signs the circuit and
    evaluates with whatever labels match."""

    def __init__(self, s: int):
        self.store = s

    def choose(self, pk, keygen, params, rng):
        n = params.cls.n_inputs
        m0, m1 = _distinct_messages(n, rng)
        diff = (m0.value ^ m1.value).bit_length() - 1
        self.C = _bit_circuit(n, diff)
        self.params, self.m = params, (m0, m1)
        enc = params.cls.encode(self.C).bits
        sig_guess = BitVector.random(params.sig.sig_bits, rng)
        self._set_input(enc + sig_guess, 0)
        return m0, m1

    def process(self, out, ct, ann, gen):
        t = ct.transmission
        bits = out.bits.copy()
        if out.stored is not None:
            late = out.stored.measure(ann.theta.reshape(1, -1), gen)
            bits = np.where(out.stored.mask, late, bits)
        self.t, self.ann, self.bits = t, ann, bits.reshape(t.n_free, t.m)

    def guess(self, sk, rng):
        if sk is None:
            return rng.getrandbits(1)
        sigma = sign(sk, self.params.cls.encode(self.C).bits)
        x = key_input(self.params, self.C, sigma)
        choices = np.array(x.to_bits(), dtype=np.uint8)
        # labels come out right only where the measured basis matches
        labels = ot.pack_rows(ot.decode_batch(choices, self.bits, self.ann))
        try:
            y = decode_output(geval(self.t.garbled, [WireLabel(v, self.t.ell) for v in labels]
                                    + list(self.t.fixed_labels)))
        except InvalidLabels:
            y = None
        if y is None:
            return rng.getrandbits(1)
        return int(y == self.C(self.m[1]))


class DistinguishingQuery(HonestKeyAdversary):
    """Queries a circuit separating the two messages, which disqualifies it."""

    def choose(self, pk, keygen, params, rng):
        n = params.cls.n_inputs
        m0, m1 = _distinct_messages(n, rng)
        diff = (m0.value ^ m1.value).bit_length() - 1
        C = _bit_circuit(n, diff)
        self.C, self.m = C, (m0, m1)
        self.key = keygen(self.C)
        self._set_input(key_input(params, self.key.C, self.key.sigma), 0)
        return m0, m1

    def guess(self, sk, rng):
        if self.result is None:
            return rng.getrandbits(1)
        return int(self.result == self.C(self.m[1]))


IND_STRATEGIES: dict[str, Callable[[CbqsParams], IndAdversary]] = {
    "guess": lambda p: GuessAdversary(),
    "honest-key": lambda p: HonestKeyAdversary(),
    "store-s": lambda p: StoreAdversary(p.s),
    "forge-after-reveal": lambda p: ForgeAfterReveal(p.s),
    "distinguishing-query": lambda p: DistinguishingQuery(),
}


def register_ind_strategy(name: str, factory: Callable[[CbqsParams], IndAdversary]) -> None:
    IND_STRATEGIES[name] = factory


def ind_trial(params: CbqsParams, strategy: str, rng: random.Random):
    """One game.  Returns (win without reveal, win with reveal, qualified,
    violations, correct guess ignoring qualification)."""
    keys = cbqsfe_setup(params.lam, rng, params)
    b = rng.getrandbits(1)
    queries: list[BooleanCircuit] = []

    def keygen(C):
        queries.append(C)
        return cbqsfe_keygen(keys, C)

    adv = IND_STRATEGIES[strategy](params)
    m0, m1 = adv.choose(keys.pk, keygen, params, rng)
    ct = cbqsfe_enc(keys.pk, (m0, m1)[b], params.s, rng, params)
    t = ct.transmission
    ledger = MemoryLedger("adversary", params.s, enforce=True)
    gen = np_generator(rng)
    out = transmit(t.message, adv, ledger, gen, info={"m": t.m, "inputs": t.n_free})
    ann = t.announcement.reveal()
    adv.process(out, ct, ann, gen)
    gseed = rng.getrandbits(64)
    qualified = all(C(m0) == C(m1) for C in queries)
    b_hidden = adv.guess(None, random.Random(gseed))
    b_reveal = adv.guess(keys.mk, random.Random(gseed))
    return ((qualified and b_hidden == b), (qualified and b_reveal == b), qualified,
            len(ledger.violations), b_hidden == b)


def run_ind_game(spec: ExperimentSpec) -> ExperimentResult:
    """Params: ``s`` (16), ``l`` (8, garbled label bits), ``lam`` (16)."""
    if spec.strategy not in IND_STRATEGIES:
        raise ParameterError(f"unknown strategy {spec.strategy!r}")
    params = CbqsParams(lam=spec.param("lam", 16), s=spec.param("s", 16), ell=spec.param("l", 8))
    hidden = np.zeros(spec.trials, dtype=np.int8)
    reveal = np.zeros(spec.trials, dtype=np.int8)
    disq = viol = raw = 0
    for i in range(spec.trials):
        h, r, q, v, correct = ind_trial(params, spec.strategy, _trial_rng(spec, i))
        hidden[i], reveal[i] = h, r
        disq += not q
        viol += v
        raw += correct
    n = spec.trials
    diff = reveal.astype(float) - hidden
    sigma = float(diff.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    p_r = float(reveal.mean())
    extra = {"reveal_estimate": p_r, "reveal_shift": float(diff.mean()), "shift_sigma": sigma,
             "disqualified": disq, "raw_correct": raw / n,
             "binomial_sigma": math.sqrt(max(p_r * (1 - p_r), 1e-12) / n)}
    return make_result(spec, int(hidden.sum()), violations=viol, extra=extra)


# ===========================================================================
# Forgetting experiment (streaming FE)
# ===========================================================================

def run_forgetting(spec: ExperimentSpec) -> ExperimentResult:
    """An adversary keeps ``budget`` bits of the master stream, then must
    output the functional key for a tag outside the span of the rows it
    fully stored.

    Strategies: ``prefix`` (n^2 bits), ``full`` (the whole stream),
    ``half-row`` (prefix that ends mid-row; the challenge is that row).
    Params: ``n`` (64), ``lam`` (16).
    """
    n = spec.param("n", 64)
    p = BcsParams(n, spec.param("lam", 16))
    W = p.row_bits
    budget = {"prefix": n * n, "half-row": n * n, "full": p.stream_bits}.get(spec.strategy)
    if budget is None:
        raise ParameterError(f"unknown strategy {spec.strategy!r}")
    full_rows = min(n + 1, budget // W)
    partial_bits = budget - W * full_rows if full_rows <= n else 0
    wins = honest_viol = 0
    for i in range(spec.trials):
        rng = _trial_rng(spec, i)
        if full_rows > n:
            c = rng.getrandbits(n + 1) or 1
        elif spec.strategy == "half-row":
            c = 1 << full_rows
        else:
            c = rng.getrandbits(n + 1) | (1 << rng.randrange(full_rows, n + 1))
        ms, _ = bcsfe_keygen(n, rng, p)
        adv_copy, ref_copy = ms.stream.tee(2)
        ledger = BitLedger("adversary", budget)
        kept, nkept = 0, 0
        for value, nbits in adv_copy:
            take = min(nbits, budget - nkept)
            if take > 0:
                kept |= (value & ((1 << take) - 1)) << nkept
                nkept += take
            ledger.carry(nkept)
        truth = bcsfe_fk_receive(ref_copy, p, BitVector(c, p.tag_bits)).value
        honest_viol += len(ms.distributor_ledger.violations)
        # best guess: stored rows exactly, stored bits of a partial row, the rest at random
        guess = 0
        for j in range(n + 1):
            if not (c >> j) & 1:
                continue
            if j < full_rows:
                guess ^= (kept >> (W * j)) & ((1 << W) - 1)
            elif j == full_rows and partial_bits:
                known = (kept >> (W * j)) & ((1 << partial_bits) - 1)
                guess ^= known | (rng.getrandbits(W - partial_bits) << partial_bits)
            else:
                guess ^= rng.getrandbits(W)
        wins += guess == truth
    unknown = W - partial_bits if spec.strategy == "half-row" else None
    return make_result(spec, wins, honest_violations=honest_viol,
                       extra={"n": n, "budget": budget, "stream_bits": p.stream_bits,
                              "full_rows": full_rows, "unknown_bits": unknown})
