"""The recursive PCF Learned Sort driver.

Per recursion level, with n keys:

1. n < tau: hand the keys to the standard sort.
2. All keys equal: already sorted.
3. Otherwise derive (alpha, beta, gamma, delta) from n, bucket with a freshly trained PCF,
   then finish every bucket: standard sort if |c_j| >= delta (a bucketing failure),
   learned sort otherwise. Buckets are concatenated in bucket order.

Each bucket's PRNG seed is derived from (parent seed, bucket index), so a run is fully
determined by (input, params) whatever order the buckets are processed in.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import numpy.typing as npt

from pcf_sort.bucketing import bucket_in_range, scan_min_max
from pcf_sort.keys import KeyArray, as_key_array
from pcf_sort.metering import OpCounter, OpKind, cost
from pcf_sort.rng import derive_seed, make_generator
from pcf_sort.schemas import SortParams, SortSummary
from pcf_sort.standard_sort import StandardSortKind, sort_list_in_place, standard_sort

__all__ = [
    "LevelParams",
    "SortReport",
    "StandardSortKind",
    "derive_level_params",
    "learned_sort",
    "standard_sort",
]

log = logging.getLogger(__name__)

# Loop control, read |c_j|, compare it with delta.
_PER_BUCKET_COST: Final = cost(arithmetic=1, comparison=2, memory_access=1)

# Loop control, read the key, write it to the output.
_CONCAT_PER_KEY_COST: Final = cost(arithmetic=1, comparison=1, memory_access=1, assignment=1)

# Per parameter: one power, one floor, one max() comparison, one store.
_LEVEL_PARAMS_COST: Final = cost(power=4, arithmetic=4, comparison=4, assignment=4)


@dataclass(frozen=True, slots=True)
class LevelParams:
    alpha: int
    beta: int
    gamma: int
    delta: int


@dataclass(frozen=True, slots=True)
class SortReport:
    sorted: KeyArray
    ops: OpCounter
    max_recursion_depth: int  # bucketing passes on the deepest path; 0 if n < tau
    failure_fallbacks: int  # buckets sent to the standard sort because |c_j| >= delta
    base_case_calls: int  # non-empty sub-arrays sorted because n < tau

    def summary(self) -> SortSummary:
        return SortSummary(
            n=len(self.sorted),
            ops=self.ops.to_dict(),
            total_ops=self.ops.total(),
            max_recursion_depth=self.max_recursion_depth,
            failure_fallbacks=self.failure_fallbacks,
            base_case_calls=self.base_case_calls,
        )


@dataclass(slots=True)
class _SortStats:
    max_depth: int = 0
    failure_fallbacks: int = 0
    base_case_calls: int = 0


def derive_level_params(
    n: int, params: SortParams, counter: OpCounter | None = None
) -> LevelParams:
    """alpha, beta, gamma, delta for a level with n keys (alpha, beta, gamma >= 1; delta >= 2)."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}.")
    if counter is not None:
        counter.charge_all(_LEVEL_PARAMS_COST)
    return LevelParams(
        alpha=max(1, math.floor(n**params.exp_a)),
        beta=max(1, math.floor(n**params.exp_b)),
        gamma=max(1, math.floor(n**params.exp_c)),
        delta=max(2, math.floor(n**params.exp_d)),
    )


def learned_sort(
    x: KeyArray | list[Any] | npt.ArrayLike,
    params: SortParams | None = None,
    counter: OpCounter | None = None,
) -> SortReport:
    """Sort `x` with PCF Learned Sort, charging all work to `counter`.

    Raises:
        InputDomainError: if any key is NaN or infinite (checked before any work).
    """
    keys = as_key_array(x)
    params = params if params is not None else SortParams()
    counter = counter if counter is not None else OpCounter()
    stats = _SortStats()
    out: list[Any] = []

    _learned_sort(keys, params, params.seed, 0, counter, stats, out)

    log.debug(
        "Learned sort of %d keys: %d ops, depth %d, %d fallbacks, %d base cases",
        len(keys),
        counter.total(),
        stats.max_depth,
        stats.failure_fallbacks,
        stats.base_case_calls,
    )
    return SortReport(
        sorted=np.array(out, dtype=keys.dtype),
        ops=counter,
        max_recursion_depth=stats.max_depth,
        failure_fallbacks=stats.failure_fallbacks,
        base_case_calls=stats.base_case_calls,
    )


def _learned_sort(
    x: KeyArray,
    params: SortParams,
    seed: int,
    depth: int,
    counter: OpCounter,
    stats: _SortStats,
    out: list[Any],
) -> None:
    n = len(x)
    counter.charge(OpKind.COMPARISON)
    if n < params.tau:
        if n:
            stats.base_case_calls += 1
            _standard_sort_into(x, params.fallback, counter, out)
        return

    x_min, x_max = scan_min_max(x, counter)
    counter.charge(OpKind.COMPARISON)
    if x_min == x_max:
        _concatenate(x.tolist(), counter, out)
        return

    level = derive_level_params(n, params, counter)
    bucket_set = bucket_in_range(
        x, x_min, x_max, level.alpha, level.beta, level.gamma, make_generator(seed), counter
    )
    depth += 1
    stats.max_depth = max(stats.max_depth, depth)

    for j, bucket in enumerate(bucket_set.buckets):
        counter.charge_all(_PER_BUCKET_COST)
        size = len(bucket)
        if size >= level.delta:
            stats.failure_fallbacks += 1
            log.debug("Bucket %d of %d holds %d >= delta=%d keys", j, n, size, level.delta)
            _standard_sort_into(bucket, params.fallback, counter, out)
        elif size:
            _learned_sort(bucket, params, derive_seed(seed, j), depth, counter, stats, out)


def _standard_sort_into(
    x: KeyArray, kind: StandardSortKind, counter: OpCounter, out: list[Any]
) -> None:
    items = x.tolist()
    sort_list_in_place(items, kind, counter)
    _concatenate(items, counter, out)


def _concatenate(items: list[Any], counter: OpCounter, out: list[Any]) -> None:
    counter.charge_all(_CONCAT_PER_KEY_COST, times=len(items))
    out.extend(items)
