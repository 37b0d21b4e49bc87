"""Closed forms behind the complexity guarantees.

- K = gamma * delta / (2n) - 2 * sigma2 * gamma / (sigma1 * beta)
- If K >= 1, Pr[some bucket holds more than delta keys]
      <= (2n / delta) * exp(-(alpha * K / (2 * gamma)) * (1 - 1/K) ** 2)
- Bucket sizes shrink at least as n -> n**d per level, so recursion stops after the least k
  with n ** (d ** k) < tau.

The bound is evaluated in the log domain: at realistic parameters the exponent reaches
-1e5 and the raw value underflows to 0.0.
"""

import math
from dataclasses import dataclass

from pcf_sort.schemas import BoundInputs, BoundReport


@dataclass(frozen=True, slots=True)
class FailureBound:
    ln_value: float
    value: float  # exp(ln_value); 0.0 after underflow, may exceed 1 (vacuous)


def compute_k(inputs: BoundInputs) -> float:
    """K, which may be negative."""
    return inputs.gamma * inputs.delta / (2 * inputs.n) - (
        2 * inputs.sigma2 * inputs.gamma / (inputs.sigma1 * inputs.beta)
    )


def failure_bound(inputs: BoundInputs) -> FailureBound | None:
    """Upper bound on the bucketing failure probability, or None when K < 1."""
    k = compute_k(inputs)
    if k < 1:
        return None
    exponent = inputs.alpha * k / (2 * inputs.gamma) * (1 - 1 / k) ** 2
    ln_value = math.log(2 * inputs.n / inputs.delta) - exponent
    return FailureBound(ln_value=ln_value, value=math.exp(ln_value))


def bound_report(inputs: BoundInputs) -> BoundReport:
    bound = failure_bound(inputs)
    return BoundReport(
        k=compute_k(inputs),
        bound=bound.value if bound is not None else None,
        ln_bound=bound.ln_value if bound is not None else None,
        applicable=bound is not None,
    )


def inputs_from_exponents(
    n: int,
    a: float,
    b: float,
    c: float,
    d: float,
    sigma1: float = 1.0,
    sigma2: float = 1.0,
) -> BoundInputs:
    """alpha = floor(n**a), ..., delta = floor(n**d), each at least 1."""
    return BoundInputs(
        alpha=max(1, math.floor(n**a)),
        beta=max(1, math.floor(n**b)),
        gamma=max(1, math.floor(n**c)),
        delta=max(1, math.floor(n**d)),
        n=n,
        sigma1=sigma1,
        sigma2=sigma2,
    )


def max_depth_bound(n: int, d: float, tau: int) -> int:
    """The least k with n ** (d ** k) < tau, i.e. the deepest recursion without fallbacks."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}.")
    if not 0 < d < 1:
        raise ValueError(f"d must lie in (0, 1), got {d}.")
    if tau < 2:
        raise ValueError(f"tau must be at least 2, got {tau}.")
    if n < tau:
        return 0

    k = math.floor(math.log(math.log(n) / math.log(tau)) / math.log(1 / d)) + 1
    # The closed form can land one off when n ** (d ** k) sits on tau; settle it by iterating.
    while _size_after(n, d, k) >= tau:
        k += 1
    while k > 1 and _size_after(n, d, k - 1) < tau:
        k -= 1
    return k


def _size_after(n: int, d: float, levels: int) -> float:
    size = float(n)
    for _ in range(levels):
        size = size**d
    return size
