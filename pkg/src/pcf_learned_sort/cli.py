"""Command-line entry point: `pcf-sort {sort,gen,bench,failure-grid,bound,skew}`.

JSON goes to stdout and data files go to `--out`. Every flag is turned into a validated
pydantic model before any work starts, so a bad flag never leaves a partial output file.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Final

import polars as pl
from pcf_sort.bounds import bound_report
from pcf_sort.learned_sort import learned_sort
from pcf_sort.schemas import BoundInputs, SortParams
from pcf_sort.standard_sort import StandardSortKind
from sort_data.datagen import generate
from sort_data.datasets import load_key_file, order_preserving_u64, write_binary_u64
from sort_data.schemas import DistributionSpec, KeyFile, KeyFormat, distribution_from_kind

from pcf_learned_sort.experiments import (
    ExponentGrid,
    OutputFormat,
    emit,
    output_filename,
    run_failure_grid,
    run_scaling_experiment,
    run_skew_comparison,
    source_label,
)

log = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR: Final[Path] = Path("data") / "experiments"

_DISTRIBUTIONS: Final[tuple[str, ...]] = ("uniform", "normal", "exponential", "lognormal", "skew")

# Flag dest -> DistributionSpec field.
_DISTRIBUTION_FLAGS: Final[dict[str, str]] = {
    "dist_min": "min",
    "dist_max": "max",
    "mu": "mu",
    "sigma": "sigma",
    "lam": "lam",
    "peak_fraction": "peak_fraction",
    "peak_width": "peak_width",
}


def parse_int_list(value: str) -> list[int]:
    parts = [p.strip() for p in value.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("Empty list")
    try:
        return [int(p) for p in parts]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid int list: {value}") from e


def parse_float_list(value: str) -> list[float]:
    parts = [p.strip() for p in value.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("Empty list")
    try:
        return [float(p) for p in parts]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid float list: {value}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcf-sort",
        description="PCF Learned Sort: sort key files, generate data, run the experiments.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG to stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)

    sort = subparsers.add_parser("sort", help="Sort a key file with PCF Learned Sort")
    _add_input_flags(sort, required=True)
    _add_sort_flags(sort)
    sort.add_argument("--out", type=Path, required=True, help="Sorted keys, BinaryU64 layout")
    sort.set_defaults(handler=cmd_sort)

    gen = subparsers.add_parser("gen", help="Generate synthetic keys into a BinaryU64 file")
    _add_distribution_flags(gen)
    gen.add_argument("--n", type=int, required=True, help="Number of keys")
    gen.add_argument("--seed", type=int, default=0, help="PRNG seed, an unsigned 64-bit integer")
    gen.add_argument("--out", type=Path, required=True, help="Output BinaryU64 file")
    gen.set_defaults(handler=cmd_gen)

    bench = subparsers.add_parser(
        "bench", help="Operations per key of learned sort and quicksort (ScalingRecord rows)"
    )
    _add_distribution_flags(bench)
    _add_input_flags(bench, required=False)
    bench.add_argument(
        "--n",
        type=parse_int_list,
        default=[1_000, 10_000, 100_000, 1_000_000],
        help="Comma-separated ascending sizes, e.g. 1000,10000",
    )
    bench.add_argument("--trials", type=int, default=10, help="Seeded trials per size")
    _add_sort_flags(bench)
    _add_output_flags(bench)
    bench.set_defaults(handler=cmd_bench)

    grid = subparsers.add_parser(
        "failure-grid", help="Empirical bucketing failure frequency per exponent cell"
    )
    _add_distribution_flags(grid)
    grid.add_argument("--n", type=int, default=100_000, help="Keys per trial")
    grid.add_argument("--trials", type=int, default=30, help="Seeded trials per cell")
    grid.add_argument("--seed", type=int, default=0, help="Master seed, an unsigned 64-bit integer")
    grid.add_argument("--x-axis", choices="abcd", default="a", help="First varied exponent")
    grid.add_argument("--y-axis", choices="abcd", default="b", help="Second varied exponent")
    values = grid.add_mutually_exclusive_group()
    values.add_argument(
        "--values", type=parse_float_list, help="Comma-separated axis values (default 0.1..0.9)"
    )
    values.add_argument(
        "--fine-values", action="store_true", help="Axis values 0.05..0.95 in steps of 0.05"
    )
    grid.add_argument("--fixed", type=float, default=0.75, help="Value of the two fixed axes")
    grid.add_argument(
        "--sigma1", type=float, help="Density lower bound (default: from --dist, else 1)"
    )
    grid.add_argument(
        "--sigma2", type=float, help="Density upper bound (default: from --dist, else 1)"
    )
    _add_output_flags(grid)
    grid.set_defaults(handler=cmd_failure_grid)

    bound = subparsers.add_parser("bound", help="K and the bucketing failure bound, as JSON")
    for name in ("alpha", "beta", "gamma", "delta", "n"):
        bound.add_argument(f"--{name}", type=int, required=True)
    bound.add_argument("--sigma1", type=float, default=1.0, help="Density lower bound")
    bound.add_argument("--sigma2", type=float, default=1.0, help="Density upper bound")
    bound.set_defaults(handler=cmd_bound)

    skew = subparsers.add_parser("skew", help="Learned sort on uniform versus skewed keys")
    skew.add_argument("--n", type=int, default=100_000, help="Keys per trial, at least 10^4")
    skew.add_argument("--trials", type=int, default=10, help="Seeded trials")
    skew.add_argument("--peak-fraction", type=float, default=0.5)
    skew.add_argument("--peak-width", type=float, default=1e-4)
    _add_sort_flags(skew)
    _add_output_flags(skew)
    skew.set_defaults(handler=cmd_skew)

    return parser


def _add_sort_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seed", type=int, default=0, help="Master seed, an unsigned 64-bit integer"
    )
    parser.add_argument("--tau", type=int, default=64, help="Base-case threshold")
    parser.add_argument("--exp", type=float, help="Set all four exponents a, b, c, d")
    for letter in "abcd":
        parser.add_argument(f"--exp-{letter}", type=float, help=f"Exponent {letter} (default 0.75)")
    parser.add_argument(
        "--fallback",
        choices=[kind.value for kind in StandardSortKind],
        default=StandardSortKind.QUICKSORT.value,
        help="Standard sort for base cases and failed buckets",
    )


def _add_distribution_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dist", choices=_DISTRIBUTIONS, help="Key distribution (default uniform)")
    parser.add_argument("--min", dest="dist_min", type=float, help="Uniform lower end")
    parser.add_argument("--max", dest="dist_max", type=float, help="Uniform upper end")
    parser.add_argument("--mu", type=float, help="Normal/LogNormal mu")
    parser.add_argument("--sigma", type=float, help="Normal/LogNormal sigma")
    parser.add_argument("--lam", type=float, help="Exponential rate")
    parser.add_argument("--peak-fraction", type=float, help="SkewMixture peak fraction")
    parser.add_argument("--peak-width", type=float, help="SkewMixture peak width")


def _add_input_flags(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--input", type=Path, required=required, help="Key file to read")
    parser.add_argument(
        "--input-format",
        choices=[f.value for f in KeyFormat],
        default=KeyFormat.BINARY_U64.value,
        help="Layout of --input",
    )
    parser.add_argument("--column", type=int, default=0, help="Timestamp column (CSV input)")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value
    )
    parser.add_argument(
        "--out", type=Path, help=f"Output file (default: under {DEFAULT_OUTPUT_DIR})"
    )
    parser.add_argument("--workers", type=int, default=1, help="Processes running trials")


def _sort_params(args: argparse.Namespace) -> SortParams:
    exponents = {}
    for letter in "abcd":
        value = getattr(args, f"exp_{letter}")
        value = args.exp if value is None else value
        if value is not None:
            exponents[f"exp_{letter}"] = value
    return SortParams(tau=args.tau, fallback=args.fallback, seed=args.seed, **exponents)


def _distribution(args: argparse.Namespace) -> DistributionSpec:
    given = {
        field: getattr(args, flag)
        for flag, field in _DISTRIBUTION_FLAGS.items()
        if getattr(args, flag, None) is not None
    }
    return distribution_from_kind(args.dist or "uniform", seed=args.seed, **given)


def _key_file(args: argparse.Namespace) -> KeyFile:
    return KeyFile(path=args.input, format=args.input_format, column=args.column)


def _output_path(args: argparse.Namespace, experiment: str, source: str) -> Path:
    if args.out is not None:
        return args.out
    return DEFAULT_OUTPUT_DIR / output_filename(experiment, source, f"seed{args.seed}", args.format)


def cmd_sort(args: argparse.Namespace) -> int:
    key_file = _key_file(args)
    params = _sort_params(args)
    report = learned_sort(load_key_file(key_file), params)
    write_binary_u64(report.sorted, args.out)
    print(report.summary().model_dump_json())
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise ValueError(f"--n must be non-negative, got {args.n}.")
    spec = _distribution(args)
    write_binary_u64(order_preserving_u64(generate(spec, args.n)), args.out)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    if args.input is not None and args.dist is not None:
        raise ValueError("Pass either --dist or --input, not both.")
    source = _key_file(args) if args.input is not None else _distribution(args)
    params = _sort_params(args)
    out = _output_path(args, "scaling", source_label(source))
    records = run_scaling_experiment(source, args.n, args.trials, params, workers=args.workers)
    emit(records, out, OutputFormat(args.format))
    return 0


def cmd_failure_grid(args: argparse.Namespace) -> int:
    spec = _distribution(args)
    values = ExponentGrid.fine_values() if args.fine_values else args.values
    grid = ExponentGrid(
        x_axis=args.x_axis,
        y_axis=args.y_axis,
        fixed=args.fixed,
        **({} if values is None else {"values": tuple(values)}),
    )
    out = _output_path(args, "failure_grid", f"{spec.kind}_{grid.name}")
    cells = run_failure_grid(
        args.n, grid, args.trials, spec, args.sigma1, args.sigma2, workers=args.workers
    )
    emit(cells, out, OutputFormat(args.format))
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    inputs = BoundInputs(
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        delta=args.delta,
        n=args.n,
        sigma1=args.sigma1,
        sigma2=args.sigma2,
    )
    print(bound_report(inputs).model_dump_json(by_alias=True))
    return 0


def cmd_skew(args: argparse.Namespace) -> int:
    params = _sort_params(args)
    out = _output_path(args, "skew", "uniform_vs_skew")
    records = run_skew_comparison(
        args.n,
        args.trials,
        params,
        peak_fraction=args.peak_fraction,
        peak_width=args.peak_width,
        workers=args.workers,
    )
    emit(list(records), out, OutputFormat(args.format))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (ValueError, OSError, pl.exceptions.PolarsError) as e:
        # pydantic.ValidationError and every domain error are ValueErrors.
        log.debug("%s failed", args.command, exc_info=True)
        print(f"pcf-sort {args.command}: error: {e}", file=sys.stderr)
        return 1
