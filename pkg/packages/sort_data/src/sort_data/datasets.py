"""Loaders for externally supplied key files (NYC/Wiki/OSM/Books-style).

Downloading the datasets is up to the user. Two layouts are understood:

- BinaryU64: an 8-byte little-endian unsigned count m followed by exactly m 8-byte
  little-endian unsigned keys. This is the layout of the public sorted-search benchmark
  files, so Wiki/OSM/Books load directly. OSM S2 cell ids are read as opaque integers.
- CSV timestamps: a header row and one "YYYY-MM-DD hh:mm:ss" column, e.g. the taxi
  pick-up datetimes. Timestamps become Unix seconds (read as UTC).
"""

import logging
from pathlib import Path
from typing import Final

import numpy as np
import numpy.typing as npt
import polars as pl
from pcf_sort.keys import KeyArray
from pcf_sort.rng import derive_seed, make_generator

from sort_data.datagen import shuffle
from sort_data.schemas import KeyFile, KeyFormat

log = logging.getLogger(__name__)

_HEADER_BYTES: Final[int] = 8
_KEY_DTYPE: Final = np.dtype("<u8")
_TIMESTAMP_FORMAT: Final[str] = "%Y-%m-%d %H:%M:%S"
_SIGN_BIT: Final = np.uint64(1 << 63)


class KeyFileFormatError(ValueError):
    def __init__(self, message: str, byte_offset: int) -> None:
        super().__init__(f"{message} (at byte offset {byte_offset})")
        self.byte_offset = byte_offset


def load_key_file(key_file: KeyFile) -> KeyArray:
    match key_file.format:
        case KeyFormat.BINARY_U64:
            return load_binary_u64(key_file.path)
        case KeyFormat.CSV_TIMESTAMP:
            return load_csv_timestamps(key_file.path, key_file.column)


def load_binary_u64(path: str | Path) -> npt.NDArray[np.uint64]:
    data = Path(path).read_bytes()
    if len(data) < _HEADER_BYTES:
        raise KeyFileFormatError(
            f"{path} is too short to hold the {_HEADER_BYTES}-byte key count", len(data)
        )
    count = int.from_bytes(data[:_HEADER_BYTES], "little")
    expected_size = _HEADER_BYTES + count * _KEY_DTYPE.itemsize
    if len(data) < expected_size:
        raise KeyFileFormatError(f"{path} declares {count} keys but is truncated", len(data))
    if len(data) > expected_size:
        raise KeyFileFormatError(
            f"{path} declares {count} keys but has trailing bytes", expected_size
        )
    keys = np.frombuffer(data, dtype=_KEY_DTYPE, count=count, offset=_HEADER_BYTES)
    log.debug("Loaded %d keys from %s", count, path)
    return keys.astype(np.uint64)


def write_binary_u64(keys: npt.ArrayLike, path: str | Path) -> None:
    """Write `keys` in the BinaryU64 layout read by `load_binary_u64`."""
    arr = np.asarray(keys)
    if arr.ndim != 1 or (arr.size and arr.dtype.kind not in "iu"):
        raise ValueError(f"BinaryU64 files hold 1-D unsigned integer keys, got {arr.dtype}.")
    if arr.size and arr.dtype.kind == "i" and arr.min() < 0:
        raise ValueError("BinaryU64 files cannot hold negative keys.")
    path = Path(path)
    path.parent.mkdir(exist_ok=True, parents=True)
    header = len(arr).to_bytes(_HEADER_BYTES, "little")
    path.write_bytes(header + arr.astype(_KEY_DTYPE).tobytes())


def order_preserving_u64(x: npt.ArrayLike) -> npt.NDArray[np.uint64]:
    """Map finite doubles to uint64 so that unsigned order equals numeric order.

    Non-negative values get their sign bit set; negative values have every bit flipped.
    This is how float keys are stored in BinaryU64 files.
    """
    values = np.asarray(x, dtype=np.float64) + 0.0  # -0.0 -> 0.0
    if not np.isfinite(values).all():
        raise ValueError("Only finite values have an order-preserving uint64 encoding.")
    bits = values.view(np.uint64)
    return np.where(bits >> np.uint64(63), ~bits, bits | _SIGN_BIT)


def load_csv_timestamps(path: str | Path, column: int) -> npt.NDArray[np.uint64]:
    """Read one timestamp column as Unix seconds, keeping row order.

    Rows whose timestamp is missing, malformed or before 1970 are skipped and counted in a
    warning.
    """
    df = pl.read_csv(path, infer_schema=False, truncate_ragged_lines=True)
    if not 0 <= column < df.width:
        raise ValueError(f"Column index {column} is out of range: {path} has {df.width} columns.")
    name = df.columns[column]
    seconds = df.select(
        pl.col(name)
        .str.strip_chars()
        .str.strptime(pl.Datetime("us"), _TIMESTAMP_FORMAT, strict=False)
        .dt.epoch("s")
    ).to_series()

    malformed = seconds.is_null() | (seconds < 0)
    n_malformed = int(malformed.sum())
    if n_malformed:
        log.warning("Skipped %d malformed rows in column %r of %s", n_malformed, name, path)
    return seconds.filter(~malformed).cast(pl.UInt64).to_numpy()


def subsample(keys: KeyArray, n: int, seed: int) -> KeyArray:
    """n keys from distinct positions chosen uniformly without replacement, then shuffled."""
    if not 0 <= n <= len(keys):
        raise ValueError(f"Cannot take {n} keys from an array of {len(keys)}.")
    positions = make_generator(seed).choice(len(keys), size=n, replace=False)
    return shuffle(keys[positions], derive_seed(seed, "shuffle"))
