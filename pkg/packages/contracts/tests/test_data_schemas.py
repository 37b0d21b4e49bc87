import polars as pl
import pytest
from contracts.data_schemas import GridCell, ScalingRecord


def _scaling_df(**overrides) -> pl.DataFrame:
    row = {
        "source": "uniform",
        "n": 1000,
        "algorithm": "learned",
        "mean_ops_per_n": 47.5,
        "std_ops_per_n": 0.8,
        "trials": 5,
        "mean_depth": 1.0,
        "failure_fallbacks_mean": 0.0,
    }
    row.update(overrides)
    return pl.DataFrame([row]).with_columns(
        pl.col("n").cast(pl.Int64), pl.col("trials").cast(pl.Int64)
    )


def _grid_df(failures: int = 3, trials: int = 30, freq: float | None = None) -> pl.DataFrame:
    return pl.DataFrame(
        {
            "a": [0.75],
            "b": [0.75],
            "c": [0.5],
            "d": [0.75],
            "empirical_failure_freq": [failures / trials if freq is None else freq],
            "theoretical_bound_ln": [None],
            "trials": [trials],
            "n": [100_000],
            "failures": [failures],
            "bound_vs_half": [None],
        },
        schema=GridCell.dtypes,
    )


def test_scaling_record_validation():
    ScalingRecord.validate(_scaling_df())
    ScalingRecord.validate(_scaling_df(algorithm="quicksort", mean_depth=0.0))


def test_scaling_record_rejects_unknown_algorithm():
    with pytest.raises(Exception, match="algorithm"):
        ScalingRecord.validate(_scaling_df(algorithm="mergesort"))


def test_scaling_record_rejects_fewer_than_one_op_per_key():
    with pytest.raises(Exception, match="mean_ops_per_n"):
        ScalingRecord.validate(_scaling_df(mean_ops_per_n=0.5))


def test_scaling_record_columns_in_declaration_order():
    assert ScalingRecord.columns == [
        "source",
        "n",
        "algorithm",
        "mean_ops_per_n",
        "std_ops_per_n",
        "trials",
        "mean_depth",
        "failure_fallbacks_mean",
    ]


def test_grid_cell_validation_allows_null_bound():
    # Should pass
    GridCell.validate(_grid_df())


def test_grid_cell_frequency_must_match_failures_over_trials():
    with pytest.raises(ValueError, match="failures / trials"):
        GridCell.validate(_grid_df(failures=3, trials=30, freq=0.2))
