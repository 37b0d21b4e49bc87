from typing import Self

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from pcf_sort.standard_sort import StandardSortKind


class SortParams(BaseModel):
    """Parameters of one learned sort.

    Each recursion level with n keys uses alpha = floor(n**exp_a), beta = floor(n**exp_b),
    gamma = floor(n**exp_c) and delta = floor(n**exp_d). The 3/4 defaults give the
    O(n log log n) expected and O(n log n) worst-case guarantees.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    exp_a: float = Field(default=0.75, gt=0, lt=1)  # sample count alpha
    exp_b: float = Field(default=0.75, gt=0, lt=1)  # number of PCF intervals beta
    exp_c: float = Field(default=0.75, gt=0, lt=1)  # number of buckets gamma (+1)
    exp_d: float = Field(default=0.75, gt=0, lt=1)  # bucket-size threshold delta

    # Sub-arrays shorter than tau go straight to the standard sort.
    tau: int = Field(default=64, ge=2)
    fallback: StandardSortKind = StandardSortKind.QUICKSORT
    seed: int = Field(default=0, ge=0, lt=2**64, description="Unsigned 64-bit PRNG seed")

    @classmethod
    def with_exponent(cls, exponent: float, **kwargs) -> Self:
        """All four exponents set to the same value."""
        return cls(exp_a=exponent, exp_b=exponent, exp_c=exponent, exp_d=exponent, **kwargs)


class BoundInputs(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: PositiveInt
    beta: PositiveInt
    gamma: PositiveInt
    delta: PositiveInt
    n: PositiveInt

    # Lower and upper bounds of the data's probability density.
    sigma1: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    sigma2: float = Field(default=1.0, gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_sigma_order(self) -> Self:
        if self.sigma1 > self.sigma2:
            raise ValueError(f"sigma1 ({self.sigma1}) must not exceed sigma2 ({self.sigma2}).")
        return self


class BoundReport(BaseModel):
    """JSON view of the failure-probability bound for one set of inputs."""

    model_config = ConfigDict(frozen=True)

    k: float = Field(serialization_alias="K")
    bound: float | None  # None when K < 1 and the bound does not apply
    ln_bound: float | None
    applicable: bool


class SortSummary(BaseModel):
    """JSON view of a `SortReport`, without the sorted keys."""

    model_config = ConfigDict(frozen=True)

    n: int
    ops: dict[str, int]  # the six op kinds plus "total"
    total_ops: int
    max_recursion_depth: int
    failure_fallbacks: int
    base_case_calls: int
