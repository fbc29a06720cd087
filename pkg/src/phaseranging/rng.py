"""Deterministic random stream derivation for Monte Carlo sweeps.

Each (sweep point, iteration) pair gets its own generator keyed off the
master seed, so iterations are independent, reproducible, and oblivious
to execution order.
"""

from __future__ import annotations

import numpy as np


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for a master seed and an integer key path."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))
