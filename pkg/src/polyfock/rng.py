"""Seeded randomness: one 64-bit seed, named child streams.

``generator(seed, "nyquist", "trial", 3)`` always yields the same stream; the
names are folded into the ``SeedSequence`` spawn key via CRC32 so streams do
not depend on call order.
"""
from __future__ import annotations

import zlib

import numpy as np

DEFAULT_SEED = 20100101


def _key(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part)
    return zlib.crc32(str(part).encode())


def generator(seed: int, *names) -> np.random.Generator:
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    ss = np.random.SeedSequence(seed, spawn_key=tuple(_key(p) for p in names))
    return np.random.default_rng(ss)
