"""Model-based bucketing with a PCF: sample, train, then scatter into gamma + 1 buckets.

Buckets respect key order: for p in bucket j and q in bucket k with j < k, p < q. This
follows from i(x) and b both being non-decreasing, so equal keys always share a bucket.
"""

import logging
from dataclasses import dataclass
from typing import Final

import numpy as np
import numpy.typing as npt

from pcf_sort.errors import DegenerateRangeError, InputDomainError
from pcf_sort.keys import Key, KeyArray, as_key_array
from pcf_sort.metering import OpCounter, combine, cost
from pcf_sort.pcf import INFER_CDF_COST, PcfModel, train_pcf

log = logging.getLogger(__name__)

# Loop control, read x_i, compare against the running min and the running max.
_SCAN_PER_KEY_COST: Final = cost(arithmetic=1, comparison=3, memory_access=1)

# Loop control, one PRNG draw, scale the draw to an index, read x_r, store a_j.
_SAMPLE_PER_DRAW_COST: Final = cost(arithmetic=3, comparison=1, memory_access=1, assignment=1)

# Loop control, read x_i, F(x_i), j = floor(F * gamma) + 1 with its clamp, c_j.append(x_i).
_SCATTER_PER_KEY_COST: Final = combine(
    INFER_CDF_COST,
    cost(arithmetic=4, comparison=3, memory_access=2, assignment=2),
)


@dataclass(frozen=True, slots=True)
class BucketSet:
    """gamma + 1 buckets c_1 ... c_{gamma+1}, stored zero-based."""

    buckets: list[KeyArray]

    @property
    def gamma(self) -> int:
        return len(self.buckets) - 1

    def sizes(self) -> npt.NDArray[np.int64]:
        return np.fromiter((len(c) for c in self.buckets), dtype=np.int64, count=len(self.buckets))

    def overflows(self, delta: int) -> bool:
        """True if some bucket holds more than `delta` keys (the bounded failure event)."""
        return bool(self.sizes().max() > delta)

    def concatenate(self) -> KeyArray:
        return np.concatenate(self.buckets)


def scan_min_max(x: KeyArray, counter: OpCounter | None = None) -> tuple[Key, Key]:
    """Single-pass min/max scan over the full array."""
    if len(x) == 0:
        raise InputDomainError("Cannot scan an empty array.")
    if counter is not None:
        # Updates of the running extremes are data dependent, so count them exactly.
        new_minima = np.count_nonzero(x[1:] < np.minimum.accumulate(x)[:-1])
        new_maxima = np.count_nonzero(x[1:] > np.maximum.accumulate(x)[:-1])
        counter.charge_all(cost(memory_access=1, assignment=2))
        counter.charge_all(_SCAN_PER_KEY_COST, times=len(x) - 1)
        counter.charge_all(cost(assignment=int(new_minima + new_maxima)))
    return x.min().item(), x.max().item()


def sample_keys(
    x: KeyArray, alpha: int, rng: np.random.Generator, counter: OpCounter | None = None
) -> KeyArray:
    """Draw `alpha` training keys from `x`, independently and with replacement.

    When alpha >= len(x) the whole array is the sample and no draws are made.
    """
    n = len(x)
    if n == 0:
        raise InputDomainError("Cannot sample from an empty array.")
    if alpha < 1:
        raise ValueError(f"alpha must be a positive integer, got {alpha}.")
    if alpha >= n:
        return x
    if counter is not None:
        counter.charge_all(_SAMPLE_PER_DRAW_COST, times=alpha)
    return x[rng.integers(0, n, size=alpha)]


def model_based_bucketing(
    x: KeyArray,
    alpha: int,
    beta: int,
    gamma: int,
    rng: np.random.Generator,
    counter: OpCounter | None = None,
) -> BucketSet:
    """Partition `x` into gamma + 1 order-respecting buckets with a freshly trained PCF.

    x_min and x_max come from a scan of the full array. An all-equal array raises
    `DegenerateRangeError`; callers are expected to filter that case out first.
    """
    x = as_key_array(x)
    if len(x) == 0:
        raise InputDomainError("Cannot bucket an empty array.")
    x_min, x_max = scan_min_max(x, counter)
    if x_min == x_max:
        raise DegenerateRangeError(f"All {len(x)} keys equal {x_min}; nothing to bucket.")
    return bucket_in_range(x, x_min, x_max, alpha, beta, gamma, rng, counter)


def bucket_in_range(
    x: KeyArray,
    x_min: Key,
    x_max: Key,
    alpha: int,
    beta: int,
    gamma: int,
    rng: np.random.Generator,
    counter: OpCounter | None = None,
) -> BucketSet:
    """`model_based_bucketing` for callers that have already scanned for x_min and x_max."""
    if gamma < 1:
        raise ValueError(f"gamma must be a positive integer, got {gamma}.")
    model: PcfModel = train_pcf(sample_keys(x, alpha, rng, counter), x_min, x_max, beta, counter)
    bucket_ids = model.bucket_ids(x, gamma)

    # A stable sort by bucket id keeps each bucket in input order, exactly like appending.
    scattered = x[np.argsort(bucket_ids, kind="stable")]
    sizes = np.bincount(bucket_ids, minlength=gamma + 2)[1:]
    buckets = np.split(scattered, np.cumsum(sizes)[:-1])

    if counter is not None:
        counter.charge_all(cost(assignment=gamma + 1))  # initialise the empty buckets
        counter.charge_all(_SCATTER_PER_KEY_COST, times=len(x))

    log.debug(
        "Bucketed %d keys into %d buckets (largest %d)", len(x), gamma + 1, int(sizes.max())
    )
    return BucketSet(buckets=buckets)
