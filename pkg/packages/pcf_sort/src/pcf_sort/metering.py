"""Basic-operation counting: the hardware-independent cost model every algorithm charges against.

Charging discipline (applied explicitly by the algorithm code, never intercepted):

- one `COMPARISON` per comparison of keys or indices, including loop-control tests;
- one `ARITHMETIC` per add/sub/mul/div/floor on keys or indices, including loop increments,
  and one per PRNG draw;
- one `POWER` per exponentiation (e.g. computing floor(n ** 0.75));
- one `LOGICAL` per boolean connective;
- one `ASSIGNMENT` per write to a variable or an array slot;
- one `MEMORY_ACCESS` per read of an array element.

Appending to a growable array costs 1 ASSIGNMENT + 1 MEMORY_ACCESS; amortised resizing is
not charged.
"""

from collections.abc import Mapping
from enum import StrEnum
from typing import Final, Self


class OpKind(StrEnum):
    ARITHMETIC = "arithmetic"
    POWER = "power"
    COMPARISON = "comparison"
    LOGICAL = "logical"
    ASSIGNMENT = "assignment"
    MEMORY_ACCESS = "memory_access"


type OpCost = Mapping[OpKind, int]
"""Per-unit cost of a compound step, e.g. one bucketing inference."""

_MAX_TALLY: Final[int] = 2**64 - 1


class OpCounter:
    """Per-kind tallies of charged basic operations.

    A counter belongs to one thread of execution at a time. Aggregate the counters of
    independent trials with `merge` (or `+`).
    """

    __slots__ = ("_tallies",)

    def __init__(self, tallies: Mapping[OpKind, int] | None = None) -> None:
        self._tallies: dict[OpKind, int] = dict.fromkeys(OpKind, 0)
        if tallies:
            for kind, n in tallies.items():
                self.charge(OpKind(kind), n)

    def charge(self, kind: OpKind, n: int = 1) -> Self:
        if n < 0:
            raise ValueError(f"Cannot charge a negative number of operations ({n}) to {kind}.")
        tally = self._tallies[kind] + n
        if tally > _MAX_TALLY:
            raise OverflowError(f"The {kind} tally overflowed 64 bits.")
        self._tallies[kind] = tally
        return self

    def charge_all(self, cost: OpCost, times: int = 1) -> Self:
        """Charge `times` repetitions of a compound step."""
        for kind, n in cost.items():
            self.charge(kind, n * times)
        return self

    def __getitem__(self, kind: OpKind) -> int:
        return self._tallies[kind]

    def total(self) -> int:
        return sum(self._tallies.values())

    def merge(self, other: OpCounter) -> OpCounter:
        """Return a new counter holding the per-kind sums of `self` and `other`."""
        return OpCounter(self._tallies).charge_all(other._tallies)

    def __add__(self, other: OpCounter) -> OpCounter:
        return self.merge(other)

    def __iadd__(self, other: OpCounter) -> Self:
        return self.charge_all(other._tallies)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OpCounter):
            return NotImplemented
        return self._tallies == other._tallies

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        tallies = ", ".join(f"{kind}={n}" for kind, n in self._tallies.items() if n)
        return f"OpCounter({tallies})"

    def reset(self) -> None:
        self._tallies = dict.fromkeys(OpKind, 0)

    def to_dict(self) -> dict[str, int]:
        """JSON-ready snapshot: the six tallies plus "total"."""
        snapshot = {str(kind): n for kind, n in self._tallies.items()}
        snapshot["total"] = self.total()
        return snapshot

    @classmethod
    def from_dict(cls, snapshot: Mapping[str, int]) -> OpCounter:
        counter = cls({OpKind(kind): snapshot[kind] for kind in OpKind})
        if "total" in snapshot and snapshot["total"] != counter.total():
            raise ValueError(
                f"Snapshot total {snapshot['total']} does not match the sum of its tallies"
                f" ({counter.total()})."
            )
        return counter


def charge(counter: OpCounter, kind: OpKind, n: int) -> OpCounter:
    return counter.charge(kind, n)


def total(counter: OpCounter) -> int:
    return counter.total()


def merge(c1: OpCounter, c2: OpCounter) -> OpCounter:
    return c1.merge(c2)


def cost(
    *,
    arithmetic: int = 0,
    power: int = 0,
    comparison: int = 0,
    logical: int = 0,
    assignment: int = 0,
    memory_access: int = 0,
) -> OpCost:
    """Build an `OpCost`, dropping zero entries."""
    entries = {
        OpKind.ARITHMETIC: arithmetic,
        OpKind.POWER: power,
        OpKind.COMPARISON: comparison,
        OpKind.LOGICAL: logical,
        OpKind.ASSIGNMENT: assignment,
        OpKind.MEMORY_ACCESS: memory_access,
    }
    return {kind: n for kind, n in entries.items() if n}


def combine(*costs: OpCost) -> OpCost:
    """Sum several per-unit costs into one."""
    combined: dict[OpKind, int] = {}
    for c in costs:
        for kind, n in c.items():
            combined[kind] = combined.get(kind, 0) + n
    return combined
