"""Dagster assets that reproduce the learned sort experiments as CSV files."""

from pathlib import Path

from dagster import (
    AssetExecutionContext,
    Config,
    StaticPartitionsDefinition,
    asset,
    define_asset_job,
)
from pcf_sort.schemas import SortParams
from sort_data.datagen import BENCHMARK_DISTRIBUTIONS
from sort_data.schemas import KeyFile, Uniform, distribution_from_kind

from pcf_learned_sort.experiments import (
    ExponentGrid,
    emit,
    output_filename,
    run_failure_grid,
    run_scaling_experiment,
    run_skew_comparison,
)

# One partition per synthetic distribution, one per pair of varied exponents.
distributions_def = StaticPartitionsDefinition([spec.kind for spec in BENCHMARK_DISTRIBUTIONS])
grid_panels_def = StaticPartitionsDefinition([grid.name for grid in ExponentGrid.panels()])


class _SortConfig(Config):
    seed: int = 0  # master seed
    exponent: float = 0.75  # a = b = c = d
    tau: int = 64
    workers: int = 1
    output_dir: str = "data/experiments"

    def sort_params(self) -> SortParams:
        return SortParams.with_exponent(self.exponent, tau=self.tau, seed=self.seed)


class ScalingConfig(_SortConfig):
    n_values: list[int] = [1_000, 10_000, 100_000, 1_000_000]
    trials: int = 10


class KeyFileScalingConfig(ScalingConfig):
    path: str
    format: str = "binary_u64"
    column: int = 0


class FailureGridConfig(Config):
    n: int = 100_000
    trials: int = 30
    seed: int = 0
    fine_values: bool = False  # 0.05 steps instead of 0.1
    fixed: float = 0.75
    workers: int = 1
    output_dir: str = "data/experiments"


class SkewConfig(_SortConfig):
    n: int = 100_000
    trials: int = 10
    peak_fraction: float = 0.5
    peak_width: float = 1e-4


@asset(partitions_def=distributions_def)
def synthetic_scaling_records(context: AssetExecutionContext, config: ScalingConfig) -> Path:
    spec = distribution_from_kind(context.partition_key)
    context.log.info(f"Scaling {spec.kind} over n={config.n_values}, {config.trials} trials")

    records = run_scaling_experiment(
        spec,
        config.n_values,
        config.trials,
        config.sort_params(),
        workers=config.workers,
    )
    path = Path(config.output_dir) / output_filename("scaling", spec.kind, f"seed{config.seed}")
    emit(records, path)
    return path


@asset
def key_file_scaling_records(context: AssetExecutionContext, config: KeyFileScalingConfig) -> Path:
    key_file = KeyFile(path=Path(config.path), format=config.format, column=config.column)
    context.log.info(f"Scaling {key_file.label} over n={config.n_values}")

    records = run_scaling_experiment(
        key_file,
        config.n_values,
        config.trials,
        config.sort_params(),
        workers=config.workers,
    )
    path = Path(config.output_dir) / output_filename(
        "scaling", key_file.label, f"seed{config.seed}"
    )
    emit(records, path)
    return path


@asset(partitions_def=grid_panels_def)
def failure_grid_cells(context: AssetExecutionContext, config: FailureGridConfig) -> Path:
    x_axis, y_axis = context.partition_key
    grid = ExponentGrid(x_axis=x_axis, y_axis=y_axis, fixed=config.fixed)
    if config.fine_values:
        grid = grid.model_copy(update={"values": ExponentGrid.fine_values()})
    spec = Uniform(seed=config.seed)
    context.log.info(f"Failure grid panel {grid.name}: {len(grid.cells())} cells at n={config.n}")

    cells = run_failure_grid(config.n, grid, config.trials, spec, workers=config.workers)
    path = Path(config.output_dir) / output_filename(
        "failure_grid", f"{spec.kind}_{grid.name}", f"seed{config.seed}"
    )
    emit(cells, path)
    return path


@asset
def skew_comparison_records(context: AssetExecutionContext, config: SkewConfig) -> Path:
    context.log.info(f"Skew comparison at n={config.n}, peak width {config.peak_width}")
    records = run_skew_comparison(
        config.n,
        config.trials,
        config.sort_params(),
        peak_fraction=config.peak_fraction,
        peak_width=config.peak_width,
        workers=config.workers,
    )
    path = Path(config.output_dir) / output_filename(
        "skew", "uniform_vs_skew", f"seed{config.seed}"
    )
    emit(list(records), path)
    return path


reproduce_scaling = define_asset_job(
    name="reproduce_scaling", selection=[synthetic_scaling_records]
)

reproduce_failure_grid = define_asset_job(
    name="reproduce_failure_grid", selection=[failure_grid_cells]
)

reproduce_skew = define_asset_job(name="reproduce_skew", selection=[skew_comparison_records])
