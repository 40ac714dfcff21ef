"""Seed discipline: one integer seed, split per (label, trial).

Every random choice in the package goes through :func:`generator`, which
derives an independent stream from ``SeedSequence(seed, spawn_key=...)``.
The stream for a trial therefore does not depend on which other trials ran
or in what order.
"""

from __future__ import annotations

import zlib

import numpy as np


def generator(seed: int, label: str = "", trial: int = 0) -> np.random.Generator:
    key = (zlib.crc32(label.encode("utf-8")), int(trial))
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=key)
    return np.random.default_rng(ss)


def as_generator(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return generator(0 if rng is None else int(rng))
