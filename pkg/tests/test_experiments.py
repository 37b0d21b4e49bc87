import logging
import pickle
from pathlib import Path

import numpy as np
import pytest
from contracts.data_schemas import GridCell, ScalingRecord
from pcf_learned_sort.experiments import (
    NA,
    Algorithm,
    ExponentGrid,
    OutputFormat,
    _scaling_tasks,
    emit,
    load_records,
    output_filename,
    run_failure_grid,
    run_scaling_experiment,
    run_skew_comparison,
    source_label,
    to_dataframe,
)
from pcf_sort.schemas import SortParams
from pydantic import ValidationError
from sort_data.datasets import write_binary_u64
from sort_data.schemas import KeyFile, Normal, Uniform


def test_scaling_records():
    records = run_scaling_experiment(Uniform(), [1_000, 2_000], trials=3)
    assert [(r.n, r.algorithm) for r in records] == [
        (1_000, "learned"),
        (1_000, "quicksort"),
        (2_000, "learned"),
        (2_000, "quicksort"),
    ]
    for record in records:
        assert record.source == "uniform"
        assert record.trials == 3
        assert record.mean_ops_per_n > 1
        assert record.std_ops_per_n >= 0
    learned = [r for r in records if r.algorithm == Algorithm.LEARNED]
    quick = [r for r in records if r.algorithm == Algorithm.QUICKSORT]
    assert all(r.mean_depth >= 1 for r in learned)
    assert all(r.mean_depth == 0 and r.failure_fallbacks_mean == 0 for r in quick)


def test_scaling_is_deterministic_per_master_seed():
    first = run_scaling_experiment(Normal(), [500], trials=2, params=SortParams(seed=3))
    second = run_scaling_experiment(Normal(), [500], trials=2, params=SortParams(seed=3))
    other = run_scaling_experiment(Normal(), [500], trials=2, params=SortParams(seed=4))
    assert first == second
    assert first != other


def test_scaling_with_one_trial_has_zero_std():
    (record,) = run_scaling_experiment(
        Uniform(), [300], trials=1, algorithms=(Algorithm.QUICKSORT,)
    )
    assert record.std_ops_per_n == 0.0


def test_scaling_does_not_depend_on_worker_count():
    serial = run_scaling_experiment(Uniform(), [1_000, 2_000], trials=2, workers=1)
    parallel = run_scaling_experiment(Uniform(), [1_000, 2_000], trials=2, workers=2)
    assert serial == parallel


def test_scaling_on_a_key_file(tmp_path: Path):
    path = tmp_path / "books.bin"
    write_binary_u64(np.random.default_rng(0).integers(0, 2**40, size=5_000), path)
    key_file = KeyFile(path=path)
    assert source_label(key_file) == "books"

    records = run_scaling_experiment(key_file, [100, 1_000], trials=2)
    assert {r.source for r in records} == {"books"}
    assert len(records) == 4

    with pytest.raises(ValueError, match="fewer than n=10000"):
        run_scaling_experiment(key_file, [10_000], trials=1)


@pytest.mark.parametrize(
    ("n_values", "trials", "workers", "match"),
    [
        ([], 1, 1, "must not be empty"),
        ([0, 10], 1, 1, "positive"),
        ([200, 100], 1, 1, "ascending"),
        ([100], 0, 1, "trials"),
        ([100], 1, 0, "workers"),
    ],
)
def test_scaling_argument_errors(n_values: list[int], trials: int, workers: int, match: str):
    with pytest.raises(ValueError, match=match):
        run_scaling_experiment(Uniform(), n_values, trials, workers=workers)


def test_skew_comparison():
    uniform, skew = run_skew_comparison(10_000, trials=1)
    assert (uniform.source, skew.source) == ("uniform", "skew")
    assert uniform.algorithm == skew.algorithm == "learned"
    assert skew.failure_fallbacks_mean >= 1
    assert skew.mean_ops_per_n > uniform.mean_ops_per_n

    with pytest.raises(ValueError, match="10\\^4"):
        run_skew_comparison(9_999, trials=1)


def test_exponent_grid_defaults():
    grid = ExponentGrid()
    assert grid.name == "ab"
    assert grid.values == (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    cells = grid.cells()
    assert len(cells) == 81
    assert cells[0] == (0.1, 0.1, 0.75, 0.75)
    assert cells[1] == (0.1, 0.2, 0.75, 0.75)
    assert all(c == d == 0.75 for _, _, c, d in cells)


def test_exponent_grid_panels():
    panels = ExponentGrid.panels(values=[0.5], fixed=0.6)
    assert [p.name for p in panels] == ["ab", "ac", "ad", "bc", "bd", "cd"]
    assert ExponentGrid(x_axis="b", y_axis="d", values=(0.2,)).cells() == [(0.75, 0.2, 0.75, 0.2)]
    assert panels[-1].cells() == [(0.6, 0.6, 0.5, 0.5)]

    fine = ExponentGrid.fine_values()
    assert len(fine) == 19
    assert (fine[0], fine[9], fine[-1]) == (0.05, 0.5, 0.95)


def test_exponent_grid_validation():
    with pytest.raises(ValidationError, match="must differ"):
        ExponentGrid(x_axis="c", y_axis="c")
    with pytest.raises(ValidationError, match="\\(0, 1\\)"):
        ExponentGrid(values=(0.5, 1.0))
    with pytest.raises(ValidationError):
        ExponentGrid(values=())
    with pytest.raises(ValidationError):
        ExponentGrid(x_axis="e")


def test_failure_grid_cells():
    grid = ExponentGrid(values=(0.5, 0.75))
    cells = run_failure_grid(2_000, grid, trials=3, spec=Uniform())
    assert [(c.a, c.b, c.c, c.d) for c in cells] == grid.cells()
    for cell in cells:
        assert cell.trials == 3
        assert cell.n == 2_000
        assert cell.empirical_failure_freq == cell.failures / 3

    balanced = cells[-1]
    assert (balanced.a, balanced.b) == (0.75, 0.75)
    assert balanced.theoretical_bound_ln is not None
    assert balanced.bound_vs_half == -1
    assert balanced.failures == 0


def test_failure_grid_marks_bound_not_applicable_below_k_of_one():
    grid = ExponentGrid(x_axis="c", y_axis="d", values=(0.1,))
    (cell,) = run_failure_grid(1_000, grid, trials=2, spec=Uniform())
    assert cell.theoretical_bound_ln is None
    assert cell.bound_vs_half is None
    assert cell.empirical_failure_freq == 1.0  # delta = 1 with two buckets always overflows


def test_failure_grid_defaults_sigmas_to_one_without_density_bounds(
    caplog: pytest.LogCaptureFixture,
):
    grid = ExponentGrid(values=(0.75,), x_axis="a", y_axis="d")
    with caplog.at_level(logging.WARNING):
        (cell,) = run_failure_grid(1_000, grid, trials=1, spec=Normal())
    assert "no positive density lower bound" in caplog.text
    assert cell.theoretical_bound_ln is not None

    (with_sigmas,) = run_failure_grid(1_000, grid, 1, Normal(), sigma1=1.0, sigma2=1.0)
    assert cell == with_sigmas


def test_failure_grid_is_deterministic_per_seed():
    grid = ExponentGrid(values=(0.3, 0.6))
    first = run_failure_grid(1_000, grid, 4, Uniform(seed=1))
    assert first == run_failure_grid(1_000, grid, 4, Uniform(seed=1))
    assert first == run_failure_grid(1_000, grid, 4, Uniform(seed=1), workers=2)


def test_output_filename():
    assert output_filename("scaling", "uniform", "seed0") == "scaling_uniform_seed0.csv"
    assert (
        output_filename("failure_grid", "uniform_ab", "seed7", OutputFormat.JSON)
        == "failure_grid_uniform_ab_seed7.json"
    )


def test_emit_csv(tmp_path: Path):
    header = ",".join(ScalingRecord.columns)

    empty = tmp_path / "empty.csv"
    emit([], empty, model=ScalingRecord)
    assert empty.read_text().splitlines() == [header]

    records = run_scaling_experiment(Uniform(), [100], trials=1, algorithms=(Algorithm.LEARNED,))
    one = tmp_path / "out" / "one.csv"
    emit(records, one)
    lines = one.read_text().splitlines()
    assert len(lines) == 2
    assert lines[0] == header
    assert lines[1].startswith("uniform,100,learned,")


def test_emit_writes_na_for_missing_bounds(tmp_path: Path):
    grid = ExponentGrid(x_axis="c", y_axis="d", values=(0.1, 0.75))
    cells = run_failure_grid(1_000, grid, trials=1, spec=Uniform())
    path = tmp_path / "grid.csv"
    emit(cells, path)

    rows = path.read_text().splitlines()[1:]
    bound_column = GridCell.columns.index("theoretical_bound_ln")
    for cell, row in zip(cells, rows, strict=True):
        value = row.split(",")[bound_column]
        assert (value == NA) == (cell.theoretical_bound_ln is None)

    loaded = load_records(path, GridCell)
    assert [c.theoretical_bound_ln is None for c in loaded] == [
        c.theoretical_bound_ln is None for c in cells
    ]


def test_emit_json_round_trip(tmp_path: Path):
    cells = run_failure_grid(500, ExponentGrid(values=(0.5, 0.75)), trials=3, spec=Uniform())
    path = tmp_path / "grid.json"
    emit(cells, path, OutputFormat.JSON)
    assert load_records(path, GridCell, OutputFormat.JSON) == cells


def test_emit_needs_a_model_for_no_records(tmp_path: Path):
    with pytest.raises(ValueError, match="model"):
        emit([], tmp_path / "x.csv")


def test_to_dataframe_validates_records():
    records = run_scaling_experiment(Uniform(), [200], trials=2)
    df = to_dataframe(records)
    assert df.columns == ScalingRecord.columns
    assert df.height == 2
    assert df["algorithm"].to_list() == ["learned", "quicksort"]


def test_key_file_tasks_hold_only_their_subsample():
    params = SortParams()
    algorithms = (Algorithm.LEARNED,)
    sizes = []
    for pool_size in (1_000, 1_000_000):
        pool = np.arange(pool_size, dtype=np.uint64)
        tasks = list(_scaling_tasks(pool, "books", [100, 200], 2, params, algorithms))
        assert [len(task.keys) for task in tasks] == [100, 100, 200, 200]
        sizes.append([len(pickle.dumps(task)) for task in tasks])
    assert sizes[0] == sizes[1]
