"""Exceptions raised by the sorting code."""


class LearnedSortError(ValueError):
    """Base class for errors raised by `pcf_sort`."""


class InputDomainError(LearnedSortError):
    """A key (or a whole input) lies outside the domain an operation accepts."""


class DegenerateRangeError(InputDomainError):
    """x_min == x_max, so the interval map i(x) is undefined.

    Callers must handle the all-equal case before training a model or bucketing.
    """
