"""Command-line scenario runner.

    bsfe run-ot --l 8 --s 32 --seed 7
    bsfe attack cbqs-ind --trials 1000
    bsfe run-bqs-fe --config params.txt --out run.jsonl

Parameters come from defaults, then an optional ``key=value`` config
file, then ``--key value`` flags.  JSONL goes to ``--out`` (stdout by
default); the summary table goes to stdout, or to stderr when the JSONL
already occupies stdout.

Exit codes: 0 success, 1 usage error, 2 ledger violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ot
from .algebra import BitVector
from .channel import MemoryLedger
from .circuits import BooleanCircuit, encoding_length, fixtures, load_fixture, parse_circuit
from .errors import BsfeError, LedgerViolation
from .rng import resolve_seed, substream
from .transcript import SCHEMA_VERSION, Transcript

EXIT_OK, EXIT_USAGE, EXIT_LEDGER = 0, 1, 2

SCENARIOS = ("run-ot", "run-otp", "run-bqs-fe", "run-cbqs-fe", "run-bcs-fe", "run-wgb", "attack", "selftest")
EXPERIMENTS = ("ot-sender", "cbqs-ind", "bcs-forget")

# every key a config may set, with its type
KEYS = {
    "s": int, "r": int, "n": int, "lam": int, "l": int, "w": int, "m": int,
    "trials": int, "seed": int, "runs": int, "c": int,
    "backend": str, "ledger": str, "unit": str, "circuit": str, "x": str,
    "strategy": str, "out": str,
}

DEFAULTS = {
    "run-ot": {"l": 8, "s": 32, "runs": 1, "c": -1},
    "run-otp": {"l": 16, "s": 8, "circuit": "adder2", "x": ""},
    "run-bqs-fe": {"s": 32, "r": 2, "lam": 8, "backend": "kil", "circuit": "adder2", "x": "", "unit": "symbol"},
    "run-cbqs-fe": {"s": 16, "l": 8, "lam": 16, "circuit": "and4", "x": ""},
    "run-bcs-fe": {"n": 0, "lam": 16, "circuit": "adder2", "x": ""},
    "run-wgb": {"n": 0, "lam": 16, "circuit": "mux"},
    "attack": {"strategy": "all", "trials": 1000, "ledger": "enforce"},
    "selftest": {},
}
COMMON = {"seed": None, "out": "-"}


class UsageError(Exception):
    pass


def parse_config(text: str) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value")
        k, v = (t.strip() for t in line.split("=", 1))
        out[k] = v
    return out


def coerce(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if k not in KEYS:
            raise UsageError(f"unknown key {k!r}")
        if v is None:
            out[k] = None
            continue
        try:
            out[k] = KEYS[k](v)
        except ValueError:
            raise UsageError(f"bad value for {k}: {v!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsfe", description="Bounded-storage FE scenario runner")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("experiment", nargs="?", help="for attack: " + ", ".join(EXPERIMENTS))
    p.add_argument("--config", type=Path)
    for k in KEYS:
        p.add_argument(f"--{k}", dest=k, default=None)
    return p


def resolve(argv) -> tuple[str, str | None, dict]:
    ns = build_parser().parse_args(argv)
    params = {**COMMON, **DEFAULTS[ns.scenario]}
    if ns.config is not None:
        try:
            params.update(coerce(parse_config(ns.config.read_text())))
        except OSError as e:
            raise UsageError(f"cannot read config: {e}") from None
    params.update(coerce({k: getattr(ns, k) for k in KEYS if getattr(ns, k) is not None}))
    params["seed"] = resolve_seed(params.get("seed"))
    if ns.scenario == "attack" and ns.experiment not in EXPERIMENTS:
        raise UsageError(f"attack needs one of {', '.join(EXPERIMENTS)}")
    if ns.scenario != "attack" and ns.experiment is not None:
        raise UsageError(f"unexpected argument {ns.experiment!r}")
    return ns.scenario, ns.experiment, params


# -- helpers -------------------------------------------------------------------

def load_circuit(spec: str) -> BooleanCircuit:
    if spec in fixtures():
        return load_fixture(spec)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"no fixture or file named {spec!r}")
    return parse_circuit(path.read_text())


def input_bits(text: str, n: int) -> BitVector:
    if not text:
        return BitVector(0, n)
    if len(text) != n or set(text) - {"0", "1"}:
        raise UsageError(f"x must be {n} characters of 0/1")
    return BitVector.from_str(text)


def record(ev: str, t: int = 0, **fields) -> dict:
    return {"v": SCHEMA_VERSION, "t": t, "ev": ev, **fields}


class Run:
    """Collects JSONL records, summary rows and ledgers for one invocation."""

    def __init__(self, scenario: str, params: dict):
        self.scenario, self.params = scenario, params
        self.transcript = Transcript()
        self.records: list[dict] = []
        self.summary: list[tuple[str, str]] = []
        self.violations = 0

    def emit_transcript(self):
        self.records.extend(self.transcript.events)
        self.transcript.events = []

    def add(self, rec: dict):
        self.emit_transcript()
        self.records.append(rec)

    def jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in self.records)


# -- scenarios -------------------------------------------------------------------

def run_ot(run: Run):
    p = run.params
    ell, s, runs = p["l"], p["s"], p["runs"]
    m = ot.required_qubits(ell, s)
    rng = substream(p["seed"], "run-ot")
    ok = 0
    for k in range(runs):
        c = p["c"] if p["c"] in (0, 1) else rng.getrandbits(1)
        s0, s1 = BitVector.random(ell, rng), BitVector.random(ell, rng)
        msg, ann = ot.ot_send(ot.OtSenderInput(s0, s1, m, ell, s), rng, run.transcript)
        ledger = MemoryLedger("receiver", 0, transcript=run.transcript)
        y = ot.ot_receive(c, msg, ann, rng, ledger, run.transcript)
        good = y == (s1 if c else s0)
        ok += good
        run.violations += len(ledger.violations)
        run.add(record("ot_result", run.transcript.clock.now, run=k, c=c, m=m, correct=bool(good)))
        run.transcript.clock.advance()
    run.summary += [("runs", str(runs)), ("qubits per run", str(m)), ("correct", f"{ok}/{runs}")]


def run_otp(run: Run):
    from .otp import otp_yao_receive, otp_yao_send

    p = run.params
    C = load_circuit(p["circuit"])
    x = input_bits(p["x"], C.n_inputs)
    rng = substream(p["seed"], "run-otp")
    t = otp_yao_send(C, p["s"], p["l"], rng, transcript=run.transcript)
    ledger = MemoryLedger("evaluator", 0, transcript=run.transcript)
    y = otp_yao_receive(t, x, rng, ledger, run.transcript)
    run.violations += len(ledger.violations)
    good = y == C(x)
    run.add(record("result", run.transcript.clock.now, x=x.to_str(), y=y.to_str(), correct=bool(good)))
    run.summary += [("circuit", p["circuit"]), ("qubits", str(t.qubit_count)), ("output", y.to_str()),
                    ("matches plain evaluation", str(bool(good)))]


def run_bqs_fe(run: Run):
    from . import bqs_fe as fe
    from .builder import CircuitClass

    p = run.params
    C = load_circuit(p["circuit"])
    x = input_bits(p["x"], C.n_inputs)
    rng = substream(p["seed"], "run-bqs-fe")
    clock = run.transcript.clock
    if p["backend"] == "yao":
        cls = CircuitClass(C.n_inputs, C.n_gates, C.n_outputs)
        params = fe.BqsFeParams(p["s"], p["r"], p["lam"], cls.w, unit=p["unit"])
    else:
        cls = None
        params = fe.BqsFeParams(p["s"], p["r"], p["lam"], encoding_length(C.n_gates, C.n_outputs),
                                unit=p["unit"])
    msec = fe.bqsfe_setup(p["lam"], p["s"], p["r"], rng, clock=clock, params=params)
    ledger = fe.honest_ledger(params, transcript=run.transcript)
    ledger.enforce = False
    pk = fe.bqsfe_pk_phase(msec, clock, run.transcript)
    k_v = fe.bqsfe_pk_receive(pk, params, rng, ledger)
    fe.close_all(pk)
    mk = fe.bqsfe_mk_phase(msec, clock, run.transcript)
    sk = fe.bqsfe_mk_receive(mk, params, C, ledger)
    fe.close_all(mk)
    ct = fe.bqsfe_enc(k_v, x, params, p["backend"], rng=rng, cls=cls, transcript=run.transcript)
    y = fe.bqsfe_dec(sk, ct, rng, transcript=run.transcript)
    run.violations += len(ledger.violations)
    good = y == C(x)
    run.add(record("result", clock.now, y=y.to_str() if y is not None else None, correct=bool(good),
                   peak=ledger.peak, peak_bound=params.peak_bound))
    run.summary += [("m", str(params.m)), ("field bits", str(params.ell)),
                    ("honest peak", f"{ledger.peak} (bound {params.peak_bound:g})"),
                    ("output", y.to_str() if y is not None else "reject"), ("correct", str(bool(good)))]


def run_cbqs_fe(run: Run):
    from . import cbqs_fe as fe

    p = run.params
    C = load_circuit(p["circuit"])
    params = fe.CbqsParams(lam=p["lam"], s=p["s"], ell=p["l"])
    if not params.cls.contains(C):
        raise UsageError(f"circuit outside the class {params.cls}")
    x = input_bits(p["x"], C.n_inputs)
    rng = substream(p["seed"], "run-cbqs-fe")
    keys = fe.cbqsfe_setup(params.lam, rng, params)
    sk = fe.cbqsfe_keygen(keys, C)
    ct = fe.cbqsfe_enc(keys.pk, x, params.s, rng, params, run.transcript)
    ledger = MemoryLedger("decryptor", 0, transcript=run.transcript)
    y = fe.cbqsfe_dec(sk, ct, rng, ledger, run.transcript)
    run.violations += len(ledger.violations)
    good = y == C(x)
    run.add(record("result", run.transcript.clock.now, y=y.to_str() if y is not None else None,
                   correct=bool(good), qubits=ct.transmission.qubit_count))
    run.summary += [("program inputs", str(params.input_bits)), ("qubits", str(ct.transmission.qubit_count)),
                    ("output", y.to_str() if y is not None else "reject"), ("correct", str(bool(good)))]


def _bcs_params(p, C):
    from . import bcs_fe as fe

    n = p["n"] or max(64, fe._min_n(C))
    return fe.BcsParams(n, p["lam"])


def run_bcs_fe(run: Run):
    from . import bcs_fe as fe
    from .bcsm import BitLedger

    p = run.params
    C = load_circuit(p["circuit"])
    x = input_bits(p["x"], C.n_inputs)
    params = _bcs_params(p, C)
    rng = substream(p["seed"], "run-bcs-fe")
    ms, dist = fe.bcsfe_keygen(params.n, rng, params, run.transcript)
    enc_copy, fk_copy = ms.stream.tee(2)
    ek_ledger = BitLedger("encryptor", params.ek_budget, enforce=False, transcript=run.transcript)
    fk_ledger = BitLedger("key-holder", params.fk_budget(2), enforce=False, transcript=run.transcript)
    k = fe.bcsfe_ek_receive(enc_copy, params, rng, ek_ledger)
    sk_C, sk_I = fe.bcsfe_fk_receive_many(fk_copy, params, [fe.circuit_tag(params, C), fe.identity_tag(params)],
                                          fk_ledger)
    sk = fe.secret_key(dist)
    ct = fe.bcsfe_enc(k, x, params, run.transcript)
    y = fe.bcsfe_dec(sk_C, C, ct, params)
    z = fe.bcsfe_dec(sk.sk, fe.identity_tag(params), ct, params)
    for led in (ms.distributor_ledger, ek_ledger, fk_ledger):
        run.violations += len(led.violations)
    good = y == C(x) and z == x
    run.add(record("result", 0, y=y.to_str() if y is not None else None,
                   identity=z.to_str() if z is not None else None, correct=bool(good),
                   peaks={"distributor": ms.distributor_ledger.peak, "encryptor": ek_ledger.peak,
                          "key-holder": fk_ledger.peak}))
    run.summary += [("n", str(params.n)), ("stream bits", str(params.stream_bits)),
                    ("C(x)", y.to_str() if y is not None else "reject"),
                    ("identity branch", z.to_str() if z is not None else "reject"), ("correct", str(bool(good)))]


def run_wgb(run: Run):
    from . import bcs_fe as fe

    p = run.params
    C = load_circuit(p["circuit"])
    params = _bcs_params(p, C)
    rng = substream(p["seed"], "run-wgb")
    xs = [BitVector(v, C.n_inputs) for v in range(1 << C.n_inputs)]
    obf = fe.wgb_from_fe_obfuscate(C, rng, params, run.transcript, query_budget=len(xs))
    ys = fe.wgb_from_fe_eval(obf, xs)
    good = all(y == C(x) for x, y in zip(xs, ys))
    run.add(record("result", 0, outputs=[y.to_str() if y is not None else None for y in ys],
                   correct=bool(good)))
    run.summary += [("circuit", p["circuit"]), ("inputs evaluated", str(len(xs))), ("all correct", str(good))]


def run_attack(run: Run, experiment: str):
    from . import harness as h

    p = run.params
    enforce = p["ledger"] != "record"
    if experiment == "ot-sender":
        names = ["s-storage", "fixed-basis", "random-basis"] if p["strategy"] == "all" else [p["strategy"]]
        fn, reg = h.run_ot_sender_security, h.OT_STRATEGIES
        extra = {"enforce": enforce}
        for k in ("l", "s", "m"):
            if p.get(k) is not None:
                extra[k] = p[k]
    elif experiment == "cbqs-ind":
        names = list(h.IND_STRATEGIES) if p["strategy"] == "all" else [p["strategy"]]
        fn, reg = h.run_ind_game, h.IND_STRATEGIES
        extra = {k: p[k] for k in ("s", "l", "lam") if p.get(k) is not None}
    else:
        names = ["prefix", "half-row", "full"] if p["strategy"] == "all" else [p["strategy"]]
        fn, reg = h.run_forgetting, None
        extra = {k: p[k] for k in ("n", "lam") if p.get(k) is not None}
    for name in names:
        if reg is not None and name not in reg:
            raise UsageError(f"unknown strategy {name!r}")
        res = fn(h.ExperimentSpec(experiment, name, p["trials"], p["seed"], extra))
        run.violations += res.honest_violations
        if enforce:
            run.violations += res.violations
        run.add(record("experiment", 0, **res.to_record()))
        run.summary.append((name, f"{res.successes}/{res.trials} = {res.estimate:.4f} "
                                  f"[{res.ci_low:.4f}, {res.ci_high:.4f}]"))


def run_selftest(run: Run) -> bool:
    from .acceptance import run_all

    results = run_all()
    for r in results:
        run.add(record("acceptance", 0, criterion=r.number, name=r.name, passed=r.passed, detail=r.detail))
        run.summary.append((f"{r.number:>2} {r.name}", ("PASS" if r.passed else "FAIL") + f"  {r.detail}"))
    return all(r.passed for r in results)


# -- entry point -------------------------------------------------------------------

def write_summary(run: Run, stream) -> None:
    width = max((len(k) for k, _ in run.summary), default=0)
    print(f"== {run.scenario} (seed {run.params['seed']})", file=stream)
    for k, v in run.summary:
        print(f"  {k.ljust(width)}  {v}", file=stream)
    if run.violations:
        print(f"  ledger violations: {run.violations}", file=stream)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        scenario, experiment, params = resolve(argv)
    except UsageError as e:
        print(f"bsfe: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # argparse
        return EXIT_USAGE if e.code else EXIT_OK
    run = Run(scenario, params)
    passed = True
    try:
        if scenario == "run-ot":
            run_ot(run)
        elif scenario == "run-otp":
            run_otp(run)
        elif scenario == "run-bqs-fe":
            run_bqs_fe(run)
        elif scenario == "run-cbqs-fe":
            run_cbqs_fe(run)
        elif scenario == "run-bcs-fe":
            run_bcs_fe(run)
        elif scenario == "run-wgb":
            run_wgb(run)
        elif scenario == "attack":
            run_attack(run, experiment)
        else:
            passed = run_selftest(run)
    except UsageError as e:
        print(f"bsfe: {e}", file=sys.stderr)
        return EXIT_USAGE
    except LedgerViolation as e:
        run.add(record("ledger_violation", run.transcript.clock.now, owner=e.owner, stored=e.stored,
                       budget=e.budget))
        run.violations += 1
    except BsfeError as e:
        print(f"bsfe: {e}", file=sys.stderr)
        return EXIT_USAGE
    run.emit_transcript()
    out = params["out"]
    if out == "-":
        sys.stdout.write(run.jsonl())
        write_summary(run, sys.stderr)
    else:
        Path(out).write_text(run.jsonl())
        write_summary(run, sys.stdout)
    if run.violations:
        return EXIT_LEDGER
    return EXIT_OK if passed else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
