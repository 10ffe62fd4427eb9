"""Seeded randomness plumbing and small statistics helpers."""

from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.default_rng(int(seed))


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for (seed, key...) -- reproducible per-trial streams."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def wilson_interval(successes: int, trials: int, z: float = 2.576) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (default 99%)."""
    if trials <= 0:
        raise ValueError("need at least one trial")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * np.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return float(max(0.0, center - half)), float(min(1.0, center + half))
