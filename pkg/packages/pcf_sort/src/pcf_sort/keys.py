"""Key arrays: the sortable 64-bit values every algorithm works on.

Supported dtypes are `uint64`, `int64` and `float64`. Ordering comparisons are always exact;
only the affine map onto the real line (used by the CDF model) goes through doubles, so keys
above 2**53 may lose low bits in bucket placement but never in the sorted output.
"""

import math
from collections.abc import Sequence
from typing import Final

import numpy as np
import numpy.typing as npt

from pcf_sort.errors import InputDomainError

type Key = int | float
type KeyArray = npt.NDArray[np.uint64] | npt.NDArray[np.int64] | npt.NDArray[np.float64]

_MASK64: Final[int] = (1 << 64) - 1


def as_key_array(x: Sequence[Key] | npt.ArrayLike) -> KeyArray:
    """Normalise `x` to a 1-D key array, rejecting NaN and infinite keys."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise InputDomainError(f"Keys must be a 1-D array, got shape {arr.shape}.")
    match arr.dtype.kind:
        case "u":
            return arr.astype(np.uint64, copy=False)
        case "i":
            return arr.astype(np.int64, copy=False)
        case "f":
            arr = arr.astype(np.float64, copy=False)
            if not np.isfinite(arr).all():
                raise InputDomainError("Keys must be finite; found NaN or infinite values.")
            return arr
    raise InputDomainError(f"Unsupported key dtype: {arr.dtype}")


def offset_scale(x_min: Key, x_max: Key) -> float:
    """Factor applied to both operands of every offset within [x_min, x_max].

    1.0 unless the keys are floats whose span overflows a double (x_max - x_min > ~1.8e308),
    in which case both ends are halved first. Halving is exact for normal doubles.
    """
    return 1.0 if math.isfinite(key_offset(x_max, x_min)) else 0.5


def key_offset(x: Key, x_min: Key, scale: float = 1.0) -> float:
    """(x - x_min) * scale as a double. Integer differences are taken exactly before rounding."""
    if isinstance(x, int | np.integer) and isinstance(x_min, int | np.integer):
        return float(int(x) - int(x_min))
    return float(x) * scale - float(x_min) * scale


def key_offsets(x: KeyArray, x_min: Key, scale: float = 1.0) -> npt.NDArray[np.float64]:
    """Vectorised `key_offset`, bit-for-bit identical to the scalar version."""
    if x.dtype.kind in "iu":
        # Every key is >= x_min, so the true difference fits in 64 unsigned bits.
        diff = x.view(np.uint64) - np.uint64(int(x_min) & _MASK64)
        return diff.astype(np.float64)
    return x.astype(np.float64, copy=False) * scale - float(x_min) * scale
