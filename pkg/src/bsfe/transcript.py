"""Logical clock and JSONL event transcripts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


class Clock:
    """Logical ticks shared by the parties of one run."""

    def __init__(self, start: int = 0):
        self.now = start

    def advance(self, ticks: int = 1) -> int:
        self.now += ticks
        return self.now

    def set(self, t: int) -> None:
        if t < self.now:
            raise ValueError("clock cannot run backwards")
        self.now = t


def jsonable(v):
    from .algebra import BitVector, F2kElement

    if isinstance(v, BitVector):
        return v.to_str()
    if isinstance(v, F2kElement):
        return format(v.value, "x")
    if isinstance(v, np.ndarray):
        if v.dtype == np.uint8 and v.ndim == 1:
            return "".join("01"[int(b)] for b in v)
        return v.tolist()
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    return v


@dataclass
class Transcript:
    clock: Clock = field(default_factory=Clock)
    enabled: bool = True
    events: list = field(default_factory=list)

    def emit(self, ev: str, **fields) -> None:
        if not self.enabled:
            return
        rec = {"v": SCHEMA_VERSION, "t": self.clock.now, "ev": ev}
        for k, x in fields.items():
            rec[k] = jsonable(x)
        self.events.append(rec)

    def of(self, ev: str) -> list[dict]:
        return [e for e in self.events if e["ev"] == ev]

    def lines(self) -> list[str]:
        return [json.dumps(e, sort_keys=True, separators=(",", ":")) for e in self.events]

    def to_jsonl(self) -> str:
        return "".join(line + "\n" for line in self.lines())


def null_transcript() -> Transcript:
    return Transcript(enabled=False)
