"""Deterministic per-trial seed derivation.

Trial i of a run with master seed S draws from Generator(PCG64(mix64(S, i))),
where mix64 is the splitmix64 finalizer applied to S + (i+1)*GOLDEN mod 2^64.
Deriving every trial seed independently of worker layout is what makes output
byte-identical for any --parallel value; the recipe is spelled out in the
README so other implementations can reproduce runs bit for bit.
"""

import numpy as np

from .errors import ParameterError

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(seed, index):
    """splitmix64-mixed 64-bit stream seed for the given trial index."""
    if not 0 <= seed <= _MASK:
        raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if index < 0:
        raise ParameterError(f"trial index must be nonnegative, got {index}")
    z = (seed + _GOLDEN * (index + 1)) & _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def trial_rng(seed, index):
    """Fresh Generator for one trial; independent of any worker layout."""
    return np.random.Generator(np.random.PCG64(mix64(seed, index)))
