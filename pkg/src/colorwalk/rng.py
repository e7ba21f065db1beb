"""Seed handling: every randomized routine takes an explicit seed."""

from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    if seed is None:
        raise ValueError("seed is required; wall-clock defaults are not allowed")
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def derived_rng(base_seed: int, *indices: int) -> np.random.Generator:
    """Generator for a sub-task (e.g. trial i of an experiment).

    Deterministic in (base_seed, indices) and independent-looking across
    different index tuples.
    """
    entropy = [int(base_seed)] + [int(i) for i in indices]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(base_seed: int, *indices: int) -> int:
    """Stable integer seed for a sub-task, from the base seed and indices."""
    ss = np.random.SeedSequence([int(base_seed)] + [int(i) for i in indices])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
