from enum import StrEnum
from typing import Annotated, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, FilePath, TypeAdapter, model_validator


class _Distribution(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default=0, ge=0, lt=2**64, description="Unsigned 64-bit PRNG seed")

    def density_bounds(self) -> tuple[float, float] | None:
        """(sigma1, sigma2): lower and upper bounds of the density on its support.

        None when the density gets arbitrarily close to zero (unbounded support), in which
        case the bucketing failure bound does not apply.
        """
        return None


class Uniform(_Distribution):
    kind: Literal["uniform"] = "uniform"
    min: float = Field(default=0.0, allow_inf_nan=False)
    max: float = Field(default=1.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_range(self) -> Self:
        if not self.max > self.min:
            raise ValueError(f"max ({self.max}) must be greater than min ({self.min}).")
        return self

    def density_bounds(self) -> tuple[float, float]:
        density = 1.0 / (self.max - self.min)
        return density, density


class Normal(_Distribution):
    kind: Literal["normal"] = "normal"
    mu: float = Field(default=0.0, allow_inf_nan=False)
    sigma: float = Field(default=1.0, gt=0, allow_inf_nan=False)


class Exponential(_Distribution):
    kind: Literal["exponential"] = "exponential"
    lam: float = Field(default=1.0, gt=0, allow_inf_nan=False)  # rate lambda


class LogNormal(_Distribution):
    kind: Literal["lognormal"] = "lognormal"
    mu: float = Field(default=0.0, allow_inf_nan=False)
    sigma: float = Field(default=1.0, gt=0, allow_inf_nan=False)


class SkewMixture(_Distribution):
    """With probability `peak_fraction` draw from Uniform(0, peak_width), else Uniform(0, 1).

    A narrow peak makes sigma2 / sigma1 large, the regime where learned sorting slows down.
    """

    kind: Literal["skew"] = "skew"
    peak_fraction: float = Field(default=0.5, gt=0, lt=1)
    peak_width: float = Field(default=1e-4, gt=0, allow_inf_nan=False)

    def density_bounds(self) -> tuple[float, float]:
        peak_density = self.peak_fraction / self.peak_width
        background = 1.0 - self.peak_fraction
        if self.peak_width <= 1.0:
            return background, peak_density + background
        return peak_density, peak_density + background


DistributionSpec = Annotated[
    Uniform | Normal | Exponential | LogNormal | SkewMixture, Field(discriminator="kind")
]

_distribution_adapter: TypeAdapter[DistributionSpec] = TypeAdapter(DistributionSpec)


def distribution_from_kind(kind: str, **params: float | int) -> DistributionSpec:
    """Build and validate a spec by name, e.g. `distribution_from_kind("normal", sigma=2)`."""
    return _distribution_adapter.validate_python({"kind": kind, **params})


class KeyFormat(StrEnum):
    BINARY_U64 = "binary_u64"  # 8-byte LE count, then that many 8-byte LE unsigned keys
    CSV_TIMESTAMP = "csv_timestamp"  # "YYYY-MM-DD hh:mm:ss" in one column, header row


class KeyFile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    path: FilePath
    format: KeyFormat = KeyFormat.BINARY_U64
    column: int = Field(default=0, ge=0)  # only used by CSV_TIMESTAMP

    @property
    def label(self) -> str:
        return self.path.stem
