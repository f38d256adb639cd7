"""Seeded randomness.  Every consumer gets its own named substream so runs
replay exactly and adding a consumer never shifts another's draws."""

from __future__ import annotations

import hashlib
import os
import random

import numpy as np

DEFAULT_SEED = 0


def resolve_seed(seed: int | None = None) -> int:
    """Explicit seed, else ``$BSFE_SEED``, else 0."""
    if seed is not None:
        return int(seed)
    env = os.environ.get("BSFE_SEED")
    return int(env) if env else DEFAULT_SEED


def derive(seed: int, *labels) -> int:
    h = hashlib.blake2b(digest_size=16)
    h.update(str(int(seed)).encode())
    for lab in labels:
        h.update(b"\x1f" + str(lab).encode())
    return int.from_bytes(h.digest(), "little")


def substream(seed: int, *labels) -> random.Random:
    return random.Random(derive(seed, *labels))


def child(rng: random.Random, *labels) -> random.Random:
    """Substream keyed by fresh bits of ``rng`` and ``labels``."""
    return substream(rng.getrandbits(64), *labels)


def np_generator(rng: random.Random) -> np.random.Generator:
    return np.random.default_rng(rng.getrandbits(128))


def random_bits(gen: np.random.Generator, n: int) -> np.ndarray:
    """n uniform bits as a uint8 array."""
    return gen.integers(0, 2, size=n, dtype=np.uint8)
