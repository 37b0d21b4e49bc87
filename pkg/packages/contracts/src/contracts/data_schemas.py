"""Data schemas for the PCF Learned Sort experiment outputs."""

from collections.abc import Sequence
from typing import Final

import patito as pt
import polars as pl

ALGORITHMS: Final[tuple[str, ...]] = ("learned", "quicksort")


class ScalingRecord(pt.Model):
    """Operations per key for one (source, n, algorithm), aggregated over seeded trials."""

    # e.g. "uniform", "skew", or the stem of a key file such as "wiki_ts_200M_uint64".
    source: str = pt.Field(dtype=pl.String)
    n: int = pt.Field(dtype=pl.Int64, gt=0)
    algorithm: str = pt.Field(
        dtype=pl.String, constraints=pl.col("algorithm").is_in(ALGORITHMS)
    )

    # Every key is at least read once, so fewer than one op per key is impossible.
    mean_ops_per_n: float = pt.Field(dtype=pl.Float64, ge=1)
    std_ops_per_n: float = pt.Field(dtype=pl.Float64, ge=0)
    trials: int = pt.Field(dtype=pl.Int64, ge=1)

    # Learned sort only; zero for quicksort.
    mean_depth: float = pt.Field(dtype=pl.Float64, ge=0)
    failure_fallbacks_mean: float = pt.Field(dtype=pl.Float64, ge=0)


class GridCell(pt.Model):
    """Bucketing failure frequency at one (a, b, c, d), with the theoretical bound alongside.

    alpha = floor(n**a), beta = floor(n**b), gamma = floor(n**c), delta = floor(n**d); a
    trial fails when some bucket holds more than delta keys.
    """

    a: float = pt.Field(dtype=pl.Float64, gt=0, lt=1)
    b: float = pt.Field(dtype=pl.Float64, gt=0, lt=1)
    c: float = pt.Field(dtype=pl.Float64, gt=0, lt=1)
    d: float = pt.Field(dtype=pl.Float64, gt=0, lt=1)
    empirical_failure_freq: float = pt.Field(dtype=pl.Float64, ge=0, le=1)

    # ln of the failure probability bound; null where K < 1 and the bound does not apply.
    theoretical_bound_ln: float | None = pt.Field(dtype=pl.Float64)
    trials: int = pt.Field(dtype=pl.Int64, ge=1)
    n: int = pt.Field(dtype=pl.Int64, gt=0)
    failures: int = pt.Field(dtype=pl.Int64, ge=0)

    # sign(ln bound - ln 0.5), for drawing the bound = 0.5 contour; null where not applicable.
    bound_vs_half: int | None = pt.Field(dtype=pl.Int8, ge=-1, le=1)

    @classmethod
    def validate(  # type: ignore[invalid-method-override]
        cls,
        dataframe: pl.DataFrame,
        columns: Sequence[str] | None = None,
        allow_missing_columns: bool = False,
        allow_superfluous_columns: bool = False,
        drop_superfluous_columns: bool = False,
    ) -> pt.DataFrame["GridCell"]:
        """Validate the given dataframe, ensuring the frequency is exactly failures / trials."""
        mismatched = dataframe.filter(
            pl.col("empirical_failure_freq") != pl.col("failures") / pl.col("trials")
        )
        if mismatched.height > 0:
            raise ValueError(
                f"{mismatched.height} GridCell rows have empirical_failure_freq !="
                " failures / trials."
            )
        return super().validate(
            dataframe=dataframe,
            columns=columns,
            allow_missing_columns=allow_missing_columns,
            allow_superfluous_columns=allow_superfluous_columns,
            drop_superfluous_columns=drop_superfluous_columns,
        )
