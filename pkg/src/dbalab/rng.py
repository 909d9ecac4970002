"""Seedable counter-based random number generation.

All stochastic components draw from numpy's Philox generator, a named
counter-based algorithm, so experiment outputs can record the generator
identity alongside the seed.
"""

import numpy as np

RNG_ALGORITHM = "philox4x64(numpy)"

_MIX = 0x9E3779B97F4A7C15  # splitmix64 increment, used to derive child seeds


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator for a 64-bit unsigned seed."""
    return np.random.Generator(np.random.Philox(key=seed & 0xFFFFFFFFFFFFFFFF))


def derive_seed(seed: int, index: int) -> int:
    """Stable 64-bit child seed for an indexed subtask (trial, repeat, ...)."""
    return (seed + _MIX * (index + 1)) & 0xFFFFFFFFFFFFFFFF
