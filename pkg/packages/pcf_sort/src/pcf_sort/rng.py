"""Seeded, splittable random number generation.

Random draws come from numpy's PCG64 bit generator. Seeds for sub-tasks (recursive buckets,
experiment trials) are derived by folding coordinates into the parent seed with the
splitmix64 finaliser, so a sub-task's stream depends only on (parent seed, coordinates) and
never on the order in which sub-tasks run.
"""

import hashlib
from typing import Final

import numpy as np

_MASK64: Final[int] = (1 << 64) - 1
_GOLDEN_GAMMA: Final[int] = 0x9E3779B97F4A7C15

type SeedPart = int | str | float


def splitmix64(state: int) -> int:
    """One splitmix64 step: advance `state` by the golden gamma and mix it."""
    z = (state + _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *parts: SeedPart) -> int:
    """Derive a 64-bit child seed from a parent seed and a path of coordinates.

    Strings are hashed with BLAKE2b and floats are quantised to 1e-9, so the same
    coordinates always give the same seed on every platform.
    """
    state = splitmix64(seed & _MASK64)
    for part in parts:
        state = splitmix64(state ^ _part_to_int(part))
    return state


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & _MASK64))


def _part_to_int(part: SeedPart) -> int:
    match part:
        case bool():
            raise TypeError("Booleans are not valid seed coordinates.")
        case int():
            return part & _MASK64
        case float():
            return round(part * 1_000_000_000) & _MASK64
        case str():
            digest = hashlib.blake2b(part.encode(), digest_size=8).digest()
            return int.from_bytes(digest, "little")
    raise TypeError(f"Unsupported seed coordinate type: {type(part).__name__}")
