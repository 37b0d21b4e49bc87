"""Seeded synthetic keys.

Samplers are fixed transforms of uniform draws from PCG64, so a stream can be reproduced
from (seed, n) alone:

- Normal and LogNormal use Box-Muller: with u1, u2 uniform on [0, 1),
  r = sqrt(-2 ln(1 - u1)), z = (r cos(2 pi u2), r sin(2 pi u2)), interleaved pairwise.
- Exponential uses the inverse CDF -ln(1 - u) / lambda.
"""

import logging
from typing import Final

import numpy as np
import numpy.typing as npt
from pcf_sort.keys import KeyArray
from pcf_sort.rng import make_generator

from sort_data.schemas import (
    DistributionSpec,
    Exponential,
    LogNormal,
    Normal,
    SkewMixture,
    Uniform,
)

log = logging.getLogger(__name__)

# The four synthetic distributions of the operation-count experiments.
BENCHMARK_DISTRIBUTIONS: Final[tuple[DistributionSpec, ...]] = (
    Uniform(),
    Normal(),
    Exponential(),
    LogNormal(),
)


def generate(spec: DistributionSpec, n: int) -> npt.NDArray[np.float64]:
    """n i.i.d. finite draws from `spec`, fully determined by `spec.seed`."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}.")
    rng = make_generator(spec.seed)
    match spec:
        case Uniform():
            keys = spec.min + (spec.max - spec.min) * rng.random(n)
        case Normal():
            keys = spec.mu + spec.sigma * _box_muller(rng, n)
        case Exponential():
            keys = -np.log1p(-rng.random(n)) / spec.lam
        case LogNormal():
            keys = np.exp(spec.mu + spec.sigma * _box_muller(rng, n))
        case SkewMixture():
            in_peak = rng.random(n) < spec.peak_fraction
            u = rng.random(n)
            keys = np.where(in_peak, u * spec.peak_width, u)
    log.debug("Generated %d %s keys with seed %d", n, spec.kind, spec.seed)
    return keys


def shuffle(x: KeyArray, seed: int) -> KeyArray:
    """A uniformly random permutation of `x` (Fisher-Yates), determined by `seed`."""
    return make_generator(seed).permutation(np.asarray(x))


def _box_muller(rng: np.random.Generator, n: int) -> npt.NDArray[np.float64]:
    pairs = (n + 1) // 2
    radius = np.sqrt(-2.0 * np.log1p(-rng.random(pairs)))
    theta = 2.0 * np.pi * rng.random(pairs)
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(theta)
    z[1::2] = radius * np.sin(theta)
    return z[:n]
