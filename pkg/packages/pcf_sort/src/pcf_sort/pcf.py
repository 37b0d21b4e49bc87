"""The piecewise constant function (PCF) CDF model.

[x_min, x_max] is cut into `beta` equal-width intervals. The interval map is

    i(x) = floor((x - x_min) / (x_max - x_min) * beta) + 1      (clamped to [1, beta + 1])

Training counts, for every i, how many of the `alpha` samples fall in an interval <= i:

    b_i = |{j : i(a_j) <= i}|,   so 0 <= b_1 <= ... <= b_{beta+1} = alpha

and inference is a table lookup: F(x) = b_{i(x)} / alpha.

`b` is stored zero-based: `prefix_counts[i - 1]` holds b_i.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import numpy.typing as npt

from pcf_sort.errors import DegenerateRangeError, InputDomainError
from pcf_sort.keys import Key, KeyArray, as_key_array, key_offset, key_offsets, offset_scale
from pcf_sort.metering import OpCounter, combine, cost

log = logging.getLogger(__name__)

# (x - x_min), / span, * beta, floor, + 1; two clamp comparisons; store the index.
INTERVAL_INDEX_COST: Final = cost(arithmetic=5, comparison=2, assignment=1)

# i(x), read b_{i(x)}, divide by alpha, store.
INFER_CDF_COST: Final = combine(
    INTERVAL_INDEX_COST, cost(arithmetic=1, memory_access=1, assignment=1)
)

# Loop control, read a_j, i(a_j), histogram[i] += 1.
_TRAIN_PER_SAMPLE_COST: Final = combine(
    INTERVAL_INDEX_COST,
    cost(arithmetic=2, comparison=1, memory_access=2, assignment=1),
)

# Loop control, b_i = b_{i-1} + histogram[i].
_TRAIN_PER_INTERVAL_COST: Final = cost(arithmetic=2, comparison=1, memory_access=2, assignment=1)


@dataclass(frozen=True, slots=True)
class PcfModel:
    """A trained PCF. Immutable, so safe to share between threads."""

    x_min: Key
    x_max: Key
    beta: int
    alpha: int
    prefix_counts: npt.NDArray[np.int64]

    def __post_init__(self) -> None:
        _check_range(self.x_min, self.x_max, self.beta)
        b = self.prefix_counts
        if b.shape != (self.beta + 1,):
            raise ValueError(f"prefix_counts must have beta + 1 = {self.beta + 1} entries.")
        if b[0] < 0 or np.any(np.diff(b) < 0):
            raise ValueError("prefix_counts must be non-negative and non-decreasing.")
        if b[-1] != self.alpha:
            raise ValueError(f"The last prefix count must equal alpha ({self.alpha}), got {b[-1]}.")
        b.flags.writeable = False

    def interval_indices(self, xs: KeyArray) -> npt.NDArray[np.int64]:
        return interval_indices(xs, self.x_min, self.x_max, self.beta)

    def cdf_many(self, xs: KeyArray) -> npt.NDArray[np.float64]:
        """Vectorised `infer_cdf` (uncharged)."""
        return self.prefix_counts[self.interval_indices(xs) - 1] / self.alpha

    def bucket_ids(self, xs: KeyArray, gamma: int) -> npt.NDArray[np.int64]:
        """floor(F(x) * gamma) + 1 for every key, clamped to [1, gamma + 1].

        Evaluated as (b_{i(x)} * gamma) // alpha + 1, the exact value of the rational
        floor, so no rounding of F(x) can push a key into a neighbouring bucket.
        """
        b = self.prefix_counts[self.interval_indices(xs) - 1]
        return np.clip(b * gamma // self.alpha + 1, 1, gamma + 1)

    def to_dict(self) -> dict[str, Any]:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "beta": self.beta,
            "alpha": self.alpha,
            "prefix_counts": self.prefix_counts.tolist(),
        }


def interval_index(
    x: Key, x_min: Key, x_max: Key, beta: int, counter: OpCounter | None = None
) -> int:
    """i(x) for a single key, in [1, beta + 1]."""
    _check_range(x_min, x_max, beta)
    if not x_min <= x <= x_max:
        raise InputDomainError(f"Key {x} lies outside the range [{x_min}, {x_max}].")
    if counter is not None:
        counter.charge_all(INTERVAL_INDEX_COST)
    scale = offset_scale(x_min, x_max)
    index = math.floor(key_offset(x, x_min, scale) / key_offset(x_max, x_min, scale) * beta) + 1
    return min(max(index, 1), beta + 1)


def interval_indices(
    xs: KeyArray, x_min: Key, x_max: Key, beta: int
) -> npt.NDArray[np.int64]:
    """Vectorised `interval_index` (uncharged; callers charge INTERVAL_INDEX_COST per key)."""
    _check_range(x_min, x_max, beta)
    scale = offset_scale(x_min, x_max)
    scaled = key_offsets(xs, x_min, scale) / key_offset(x_max, x_min, scale) * beta
    return np.clip(np.floor(scaled).astype(np.int64) + 1, 1, beta + 1)


def train_pcf(
    sample: KeyArray, x_min: Key, x_max: Key, beta: int, counter: OpCounter | None = None
) -> PcfModel:
    """Train a PCF on `sample` by histogramming interval indices then taking prefix sums.

    Charged cost is O(alpha + beta).
    """
    sample = as_key_array(sample)
    alpha = len(sample)
    if alpha == 0:
        raise InputDomainError("Cannot train a PCF on an empty sample.")
    _check_range(x_min, x_max, beta)
    if sample.min() < x_min or sample.max() > x_max:
        raise InputDomainError(
            f"Sample keys must lie in [{x_min}, {x_max}];"
            f" found [{sample.min()}, {sample.max()}]."
        )

    # Slot 0 is never hit (i(x) >= 1), it keeps the indexing one-based.
    histogram = np.bincount(interval_indices(sample, x_min, x_max, beta), minlength=beta + 2)
    prefix_counts = np.cumsum(histogram[1:], dtype=np.int64)

    if counter is not None:
        counter.charge_all(cost(assignment=beta + 2))  # zero the histogram
        counter.charge_all(_TRAIN_PER_SAMPLE_COST, times=alpha)
        counter.charge_all(_TRAIN_PER_INTERVAL_COST, times=beta + 1)

    log.debug("Trained PCF with alpha=%d, beta=%d on [%s, %s]", alpha, beta, x_min, x_max)
    return PcfModel(
        x_min=x_min, x_max=x_max, beta=beta, alpha=alpha, prefix_counts=prefix_counts
    )


def infer_cdf(model: PcfModel, x: Key, counter: OpCounter | None = None) -> float:
    """F(x) = b_{i(x)} / alpha, in [0, 1] and non-decreasing in x."""
    index = interval_index(x, model.x_min, model.x_max, model.beta)
    if counter is not None:
        counter.charge_all(INFER_CDF_COST)
    return int(model.prefix_counts[index - 1]) / model.alpha


def _check_range(x_min: Key, x_max: Key, beta: int) -> None:
    if beta < 1:
        raise ValueError(f"beta must be a positive integer, got {beta}.")
    if x_min == x_max:
        raise DegenerateRangeError(
            f"x_min == x_max == {x_min}: the interval map is undefined for a degenerate range."
        )
    if x_min > x_max:
        raise InputDomainError(f"x_min ({x_min}) must be smaller than x_max ({x_max}).")
