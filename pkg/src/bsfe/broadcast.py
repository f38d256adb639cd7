"""Ideal program broadcast with memory and query accounting.

One handle distributes a hidden program to many recipients.  An honest
recipient evaluates it once with ``12 * m_out`` units of quantum memory,
and those units are held on its ledger for the duration of the
evaluation.  An adversary with ``s`` qubits of storage gets at most
``s // (2 * m_out)`` evaluations, and only while the window is open.
After the window closes the evaluation key is public, so honest
evaluations remain possible.

``m_out`` is counted in output symbols by default; ``unit="bit"`` counts
raw output bits instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .channel import MemoryLedger
from .circuits import BooleanCircuit, eval_circuit
from .errors import BudgetExhausted, Expired, ParameterError
from .transcript import Clock, Transcript

HONEST_FACTOR = 12
BOUND_APPLICATIONS = 2
DEFAULT_MIN_OUTPUT_BITS = 8
UNITS = ("symbol", "bit")

HONEST, ADVERSARY = "honest", "adversary"


@dataclass
class BroadcastHandle:
    program: BooleanCircuit | Callable
    s: int
    m_out: int
    t_start: int
    t_end: int
    clock: Clock
    unit: str = "symbol"
    symbol_bits: int = 1
    adversary_evals: int = 0
    honest_evals: int = 0
    closed: bool = False
    warnings: list = field(default_factory=list)
    transcript: Transcript | None = field(default=None, repr=False)

    @property
    def honest_mem_charge(self) -> int:
        return HONEST_FACTOR * self.m_out

    @property
    def adversary_budget(self) -> int:
        return self.s // (2 * self.m_out)

    @property
    def r_markers(self) -> int:
        return BOUND_APPLICATIONS

    @property
    def output_bits(self) -> int:
        return self.m_out * (self.symbol_bits if self.unit == "symbol" else 1)

    def window_open(self) -> bool:
        return not self.closed and self.t_start <= self.clock.now <= self.t_end


def _output_len(program) -> int | None:
    return program.n_outputs if isinstance(program, BooleanCircuit) else None


def br_setup(program, s: int, t_end: int, m_out: int | None = None, *, clock: Clock | None = None,
             t_start: int | None = None, unit: str = "symbol", symbol_bits: int = 1,
             min_output_bits: int = DEFAULT_MIN_OUTPUT_BITS,
             transcript: Transcript | None = None) -> BroadcastHandle:
    """Open a broadcast of ``program`` until tick ``t_end``.

    ``symbol_bits`` is the width of one output symbol; with ``unit="bit"``
    the accounting length becomes ``m_out * symbol_bits``.
    """
    if unit not in UNITS:
        raise ParameterError(f"unit must be one of {UNITS}")
    if m_out is None:
        m_out = _output_len(program)
        if m_out is None:
            raise ParameterError("output length required for callable programs")
    if unit == "bit":
        m_out, symbol_bits = m_out * symbol_bits, 1
    if m_out < 1 or s < 0:
        raise ParameterError(f"m_out={m_out}, s={s}")
    clock = clock if clock is not None else (transcript.clock if transcript is not None else Clock())
    start = clock.now if t_start is None else t_start
    if t_end < start:
        raise ParameterError("window ends before it starts")
    h = BroadcastHandle(program, s, m_out, start, t_end, clock, unit, symbol_bits, transcript=transcript)
    if h.output_bits < min_output_bits:
        h.warnings.append(f"output of {h.output_bits} bits: guessing probability "
                          f"2^-{h.output_bits} is above the 2^-{min_output_bits} threshold")
    if transcript is not None:
        transcript.emit("br_setup", s=s, m_out=m_out, unit=unit, t_start=start, t_end=t_end,
                        honest_charge=h.honest_mem_charge, adversary_budget=h.adversary_budget,
                        r=h.r_markers, warnings=h.warnings)
    return h


def br_eval(h: BroadcastHandle, x, party: str = HONEST, ledger: MemoryLedger | None = None):
    if party == ADVERSARY:
        if not h.window_open():
            raise Expired()
        if h.adversary_evals >= h.adversary_budget:
            raise BudgetExhausted()
        h.adversary_evals += 1
        y = _run(h.program, x)
    elif party == HONEST:
        charge = h.honest_mem_charge
        if ledger is not None:
            ledger.hold(charge)
            try:
                ledger.check(where="broadcast")
                y = _run(h.program, x)
            finally:
                ledger.release(charge)
        else:
            y = _run(h.program, x)
        h.honest_evals += 1
    else:
        raise ParameterError(f"unknown party {party!r}")
    if h.transcript is not None:
        h.transcript.emit("br_eval", party=party, n=h.adversary_evals if party == ADVERSARY else h.honest_evals)
    return y


def _run(program, x):
    return eval_circuit(program, x) if isinstance(program, BooleanCircuit) else program(x)


def br_close(h: BroadcastHandle) -> None:
    """End of the window: the evaluation key becomes public."""
    if h.closed:
        return
    h.closed = True
    if h.transcript is not None:
        h.transcript.emit("br_close", adversary_evals=h.adversary_evals, honest_evals=h.honest_evals)
