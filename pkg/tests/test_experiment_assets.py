from pathlib import Path

import numpy as np
import polars as pl
from contracts.data_schemas import GridCell, ScalingRecord
from dagster import RunConfig, materialize
from pcf_learned_sort.defs.experiment_assets import (
    FailureGridConfig,
    KeyFileScalingConfig,
    ScalingConfig,
    SkewConfig,
    distributions_def,
    failure_grid_cells,
    grid_panels_def,
    key_file_scaling_records,
    skew_comparison_records,
    synthetic_scaling_records,
)
from sort_data.datasets import write_binary_u64


def test_partitions():
    kinds = ["uniform", "normal", "exponential", "lognormal"]
    assert distributions_def.get_partition_keys() == kinds
    assert grid_panels_def.get_partition_keys() == ["ab", "ac", "ad", "bc", "bd", "cd"]


def test_synthetic_scaling_records(tmp_path: Path):
    config = ScalingConfig(n_values=[200, 400], trials=2, seed=1, output_dir=str(tmp_path))
    result = materialize(
        [synthetic_scaling_records],
        partition_key="exponential",
        run_config=RunConfig(ops={"synthetic_scaling_records": config}),
    )

    assert result.success
    path = result.output_for_node("synthetic_scaling_records")
    assert path == tmp_path / "scaling_exponential_seed1.csv"
    df = ScalingRecord.validate(pl.read_csv(path, schema=ScalingRecord.dtypes))
    assert df.height == 4
    assert set(df["source"]) == {"exponential"}


def test_key_file_scaling_records(tmp_path: Path):
    key_path = tmp_path / "osm.bin"
    write_binary_u64(np.random.default_rng(0).integers(0, 2**62, size=2_000), key_path)
    config = KeyFileScalingConfig(
        path=str(key_path), n_values=[100, 1_000], trials=1, output_dir=str(tmp_path)
    )
    result = materialize(
        [key_file_scaling_records],
        run_config=RunConfig(ops={"key_file_scaling_records": config}),
    )

    assert result.success
    path = result.output_for_node("key_file_scaling_records")
    assert path.name == "scaling_osm_seed0.csv"
    assert pl.read_csv(path)["source"].to_list() == ["osm"] * 4


def test_failure_grid_cells(tmp_path: Path):
    config = FailureGridConfig(n=300, trials=1, output_dir=str(tmp_path))
    result = materialize(
        [failure_grid_cells],
        partition_key="bd",
        run_config=RunConfig(ops={"failure_grid_cells": config}),
    )

    assert result.success
    path = result.output_for_node("failure_grid_cells")
    assert path.name == "failure_grid_uniform_bd_seed0.csv"
    df = pl.read_csv(path, schema=GridCell.dtypes, null_values="NA")
    assert df.height == 81
    assert set(df["a"]) == {0.75}
    assert set(df["c"]) == {0.75}


def test_skew_comparison_records(tmp_path: Path):
    config = SkewConfig(n=10_000, trials=1, output_dir=str(tmp_path))
    result = materialize(
        [skew_comparison_records],
        run_config=RunConfig(ops={"skew_comparison_records": config}),
    )

    assert result.success
    df = pl.read_csv(result.output_for_node("skew_comparison_records"))
    assert df["source"].to_list() == ["uniform", "skew"]
