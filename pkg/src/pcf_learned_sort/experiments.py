"""Operation-count and bucketing-failure experiments, written out as CSV or JSON records.

Every trial draws its data and its PRNG streams from a seed derived from
(master seed, experiment, source, cell coordinates, trial index). Trials share no state, so
they may run in a process pool and the emitted records never depend on the worker count.
"""

import logging
import math
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import StrEnum
from itertools import combinations
from pathlib import Path
from typing import Final, Literal, Self

import numpy as np
import patito as pt
import polars as pl
from contracts.data_schemas import GridCell, ScalingRecord
from pcf_sort.bounds import failure_bound, inputs_from_exponents
from pcf_sort.bucketing import model_based_bucketing
from pcf_sort.keys import KeyArray
from pcf_sort.learned_sort import learned_sort, standard_sort
from pcf_sort.metering import OpCounter
from pcf_sort.rng import derive_seed, make_generator
from pcf_sort.schemas import SortParams
from pcf_sort.standard_sort import StandardSortKind
from pydantic import BaseModel, ConfigDict, Field, model_validator
from sort_data.datagen import generate
from sort_data.datasets import load_key_file, subsample
from sort_data.schemas import DistributionSpec, KeyFile, SkewMixture, Uniform

log = logging.getLogger(__name__)

NA: Final[str] = "NA"
_LN_HALF: Final[float] = math.log(0.5)


class Algorithm(StrEnum):
    LEARNED = "learned"
    QUICKSORT = "quicksort"


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


type Source = DistributionSpec | KeyFile
type Axis = Literal["a", "b", "c", "d"]

_AXES: Final[tuple[Axis, ...]] = ("a", "b", "c", "d")


def source_label(source: Source) -> str:
    """"uniform", "skew", ... for synthetic sources; the file stem for key files."""
    return source.label if isinstance(source, KeyFile) else source.kind


def output_filename(
    experiment: str, source: str, tag: str, format: OutputFormat = OutputFormat.CSV
) -> str:
    return f"{experiment}_{source}_{tag}.{format}"


# --- Scaling ---


@dataclass(frozen=True, slots=True)
class _ScalingTask:
    # Exactly one is set. Key-file trials carry their own n-key subsample, never the file.
    spec: DistributionSpec | None
    keys: KeyArray | None
    n: int
    trial_seed: int
    params: SortParams
    algorithms: tuple[Algorithm, ...]


@dataclass(frozen=True, slots=True)
class _TrialResult:
    total_ops: int
    depth: int = 0
    failure_fallbacks: int = 0


def run_scaling_experiment(
    source: Source,
    n_values: Sequence[int],
    trials: int,
    params: SortParams | None = None,
    *,
    algorithms: Sequence[Algorithm] = (Algorithm.LEARNED, Algorithm.QUICKSORT),
    workers: int = 1,
) -> list[ScalingRecord]:
    """Mean and standard deviation of total_ops / n per (n, algorithm) over seeded trials.

    Each trial generates fresh data (or subsamples and shuffles a key file) and sorts the same
    keys with every requested algorithm. `params.seed` is the master seed.

    Raises:
        ValueError: if n_values is empty, not ascending or holds a non-positive n, if
            trials < 1, or if a key file holds fewer than max(n_values) keys.
    """
    params = params if params is not None else SortParams()
    _check_trials(trials)
    _check_n_values(n_values)
    label = source_label(source)

    pool_or_spec: KeyArray | DistributionSpec
    if isinstance(source, KeyFile):
        pool_or_spec = load_key_file(source)
        if n_values[-1] > len(pool_or_spec):
            raise ValueError(
                f"{source.path} holds {len(pool_or_spec)} keys, fewer than n={n_values[-1]}."
            )
    else:
        pool_or_spec = source

    tasks = _scaling_tasks(pool_or_spec, label, n_values, trials, params, tuple(algorithms))
    results = _map(_run_scaling_trial, tasks, workers)

    records: list[ScalingRecord] = []
    for i, n in enumerate(n_values):
        per_n = results[i * trials : (i + 1) * trials]
        for j, algorithm in enumerate(algorithms):
            record = _aggregate(label, n, algorithm, [r[j] for r in per_n])
            log.info(
                "%s n=%d %s: %.2f ops/key over %d trials",
                label,
                n,
                algorithm,
                record.mean_ops_per_n,
                trials,
            )
            records.append(record)
    return records


def _scaling_tasks(
    source: KeyArray | DistributionSpec,
    label: str,
    n_values: Sequence[int],
    trials: int,
    params: SortParams,
    algorithms: tuple[Algorithm, ...],
) -> Iterator[_ScalingTask]:
    """One task per (n, trial), in n-major order. A key pool is subsampled here, per task."""
    for n in n_values:
        for trial in range(trials):
            trial_seed = derive_seed(params.seed, "scaling", label, n, trial)
            if isinstance(source, np.ndarray):
                spec, keys = None, subsample(source, n, trial_seed)
            else:
                spec, keys = source, None
            yield _ScalingTask(
                spec=spec,
                keys=keys,
                n=n,
                trial_seed=trial_seed,
                params=params,
                algorithms=algorithms,
            )


def _run_scaling_trial(task: _ScalingTask) -> list[_TrialResult]:
    keys = task.keys
    if keys is None:
        assert task.spec is not None
        keys = generate(task.spec.model_copy(update={"seed": task.trial_seed}), task.n)

    results = []
    for algorithm in task.algorithms:
        counter = OpCounter()
        match algorithm:
            case Algorithm.LEARNED:
                params = task.params.model_copy(
                    update={"seed": derive_seed(task.trial_seed, "learned_sort")}
                )
                report = learned_sort(keys, params, counter)
                results.append(
                    _TrialResult(
                        total_ops=counter.total(),
                        depth=report.max_recursion_depth,
                        failure_fallbacks=report.failure_fallbacks,
                    )
                )
            case Algorithm.QUICKSORT:
                standard_sort(keys, StandardSortKind.QUICKSORT, counter)
                results.append(_TrialResult(total_ops=counter.total()))
    return results


def _aggregate(
    label: str, n: int, algorithm: Algorithm, results: Sequence[_TrialResult]
) -> ScalingRecord:
    ops_per_n = np.array([r.total_ops / n for r in results])
    return ScalingRecord(
        source=label,
        n=n,
        algorithm=algorithm.value,
        mean_ops_per_n=float(ops_per_n.mean()),
        std_ops_per_n=float(ops_per_n.std(ddof=1)) if len(results) > 1 else 0.0,
        trials=len(results),
        mean_depth=float(np.mean([r.depth for r in results])),
        failure_fallbacks_mean=float(np.mean([r.failure_fallbacks for r in results])),
    )


# --- Skew ---


def run_skew_comparison(
    n: int,
    trials: int,
    params: SortParams | None = None,
    *,
    peak_fraction: float = 0.5,
    peak_width: float = 1e-4,
    workers: int = 1,
) -> tuple[ScalingRecord, ScalingRecord]:
    """Learned sort on Uniform(0, 1) and on a skewed mixture of the same size.

    Returns:
        (uniform record, skew record).
    """
    if n < 10_000:
        raise ValueError(f"The skew comparison needs n >= 10^4, got {n}.")
    skew = SkewMixture(peak_fraction=peak_fraction, peak_width=peak_width)
    uniform_record, skew_record = (
        run_scaling_experiment(
            source, [n], trials, params, algorithms=(Algorithm.LEARNED,), workers=workers
        )[0]
        for source in (Uniform(), skew)
    )
    return uniform_record, skew_record


# --- Failure grid ---


class ExponentGrid(BaseModel):
    """One panel of the failure grid: two exponents vary, the other two stay at `fixed`."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x_axis: Axis = "a"
    y_axis: Axis = "b"
    values: tuple[float, ...] = Field(
        default=tuple(round(0.1 * i, 2) for i in range(1, 10)), min_length=1
    )
    fixed: float = Field(default=0.75, gt=0, lt=1)

    @model_validator(mode="after")
    def _check_axes(self) -> Self:
        if self.x_axis == self.y_axis:
            raise ValueError(f"The two grid axes must differ, got {self.x_axis!r} twice.")
        if not all(0 < v < 1 for v in self.values):
            raise ValueError(f"Grid values must lie in (0, 1), got {self.values}.")
        return self

    @property
    def name(self) -> str:
        return f"{self.x_axis}{self.y_axis}"

    @staticmethod
    def fine_values() -> tuple[float, ...]:
        """0.05, 0.10, ..., 0.95."""
        return tuple(round(0.05 * i, 2) for i in range(1, 20))

    @classmethod
    def panels(cls, values: Sequence[float] | None = None, fixed: float = 0.75) -> list[Self]:
        """All six (x_axis, y_axis) pairs: ab, ac, ad, bc, bd, cd."""
        extra = {} if values is None else {"values": tuple(values)}
        return [cls(x_axis=x, y_axis=y, fixed=fixed, **extra) for x, y in combinations(_AXES, 2)]

    def cells(self) -> list[tuple[float, float, float, float]]:
        """(a, b, c, d) for every cell, x_axis outermost."""
        cells = []
        for x in self.values:
            for y in self.values:
                exps = dict.fromkeys(_AXES, self.fixed) | {self.x_axis: x, self.y_axis: y}
                cells.append((exps["a"], exps["b"], exps["c"], exps["d"]))
        return cells


@dataclass(frozen=True, slots=True)
class _GridTask:
    spec: DistributionSpec
    n: int
    exponents: tuple[float, float, float, float]
    trial_seeds: tuple[int, ...]


def run_failure_grid(
    n: int,
    grid: ExponentGrid,
    trials: int,
    spec: DistributionSpec,
    sigma1: float | None = None,
    sigma2: float | None = None,
    *,
    workers: int = 1,
) -> list[GridCell]:
    """Empirical frequency of the bucketing failure (some |c_j| > delta) per grid cell.

    sigma1 and sigma2 default to the density bounds of `spec`, or to 1 for distributions
    whose density has no positive lower bound, so the bound column is null exactly where
    K < 1. `spec.seed` is the master seed.
    """
    _check_trials(trials)
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}.")
    sigmas = _resolve_sigmas(spec, sigma1, sigma2)

    tasks = [
        _GridTask(
            spec=spec,
            n=n,
            exponents=cell,
            trial_seeds=tuple(
                derive_seed(spec.seed, "failure_grid", spec.kind, n, *cell, trial)
                for trial in range(trials)
            ),
        )
        for cell in grid.cells()
    ]
    log.info("Failure grid %s: %d cells x %d trials at n=%d", grid.name, len(tasks), trials, n)
    failures = _map(_count_failures, tasks, workers)

    cells = []
    for task, n_failures in zip(tasks, failures, strict=True):
        a, b, c, d = task.exponents
        bound = failure_bound(inputs_from_exponents(n, a, b, c, d, *sigmas))
        ln_bound = bound.ln_value if bound is not None else None
        if ln_bound is None:
            log.debug("Bound not applicable at a=%s b=%s c=%s d=%s", a, b, c, d)
        cells.append(
            GridCell(
                a=a,
                b=b,
                c=c,
                d=d,
                empirical_failure_freq=n_failures / trials,
                theoretical_bound_ln=ln_bound,
                trials=trials,
                n=n,
                failures=n_failures,
                bound_vs_half=None if ln_bound is None else _sign(ln_bound - _LN_HALF),
            )
        )
    return cells


def _count_failures(task: _GridTask) -> int:
    a, b, c, d = task.exponents
    inputs = inputs_from_exponents(task.n, a, b, c, d)
    failures = 0
    for trial_seed in task.trial_seeds:
        keys = generate(task.spec.model_copy(update={"seed": trial_seed}), task.n)
        bucket_set = model_based_bucketing(
            keys,
            inputs.alpha,
            inputs.beta,
            inputs.gamma,
            make_generator(derive_seed(trial_seed, "bucketing")),
        )
        failures += bucket_set.overflows(inputs.delta)
    return failures


def _resolve_sigmas(
    spec: DistributionSpec, sigma1: float | None, sigma2: float | None
) -> tuple[float, float]:
    defaults = spec.density_bounds()
    if sigma1 is None or sigma2 is None:
        if defaults is None:
            log.warning(
                "%s keys have no positive density lower bound; the failure bound uses"
                " 1 for any sigma not given.",
                spec.kind,
            )
            defaults = (1.0, 1.0)
        sigma1 = defaults[0] if sigma1 is None else sigma1
        sigma2 = defaults[1] if sigma2 is None else sigma2
    return sigma1, sigma2


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


# --- Output ---


def to_dataframe(
    records: Sequence[pt.Model], model: type[pt.Model] | None = None
) -> pl.DataFrame:
    """Records as a validated DataFrame, one column per field in declaration order."""
    model = _resolve_model(records, model)
    df = pl.DataFrame(
        {name: [getattr(r, name) for r in records] for name in model.columns},
        schema=model.dtypes,
    )
    model.validate(df)
    return df


def emit(
    records: Sequence[pt.Model],
    path: str | Path,
    format: OutputFormat = OutputFormat.CSV,
    *,
    model: type[pt.Model] | None = None,
) -> None:
    """Write records as CSV (header row, nulls as "NA") or as a JSON array of objects.

    `model` is only needed when `records` is empty.
    """
    df = to_dataframe(records, model)
    path = Path(path)
    path.parent.mkdir(exist_ok=True, parents=True)
    match format:
        case OutputFormat.CSV:
            df.write_csv(path, null_value=NA)
        case OutputFormat.JSON:
            df.write_json(path)
    log.info("Wrote %d records to %s", df.height, path)


def load_records[M: pt.Model](
    path: str | Path, model: type[M], format: OutputFormat = OutputFormat.CSV
) -> list[M]:
    """Parse a file written by `emit` back into validated records."""
    match format:
        case OutputFormat.CSV:
            df = pl.read_csv(path, schema=model.dtypes, null_values=NA)
        case OutputFormat.JSON:
            df = pl.read_json(path, schema=model.dtypes)
    model.validate(df)
    return [model(**row) for row in df.iter_rows(named=True)]


def _resolve_model(records: Sequence[pt.Model], model: type[pt.Model] | None) -> type[pt.Model]:
    if model is not None:
        return model
    if not records:
        raise ValueError("Pass `model` to write an empty record list.")
    return type(records[0])


# --- Shared ---


def _map[T, R](fn: Callable[[T], R], tasks: Iterable[T], workers: int) -> list[R]:
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}.")
    if workers == 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}.")


def _check_n_values(n_values: Sequence[int]) -> None:
    if not n_values:
        raise ValueError("n_values must not be empty.")
    if any(n < 1 for n in n_values):
        raise ValueError(f"Every n must be positive, got {list(n_values)}.")
    if list(n_values) != sorted(n_values):
        raise ValueError(f"n_values must be ascending, got {list(n_values)}.")
