"""O(n log n) comparison sorts used for base cases and failed buckets.

`QUICKSORT` is a median-of-three Hoare quicksort that hands sub-arrays shorter than 16 to
insertion sort. `INTROSORT` adds a heapsort switch once a sub-array has been partitioned
2 * floor(log2 n) times, which bounds the worst case at O(n log n).

All sorts work in place on Python lists and count their basic operations exactly. Inner
loops are not instrumented one step at a time: the number of steps a scan took is recovered
from how far its index moved, and charged in one go.
"""

from enum import StrEnum
from typing import Any, Final

import numpy as np

from pcf_sort.keys import Key, KeyArray, as_key_array
from pcf_sort.metering import OpCounter, cost

INSERTION_SORT_THRESHOLD: Final[int] = 16

# (arithmetic, comparison, logical, assignment, memory_access)
type _Tally = tuple[int, int, int, int, int]


class StandardSortKind(StrEnum):
    QUICKSORT = "quick"
    INTROSORT = "intro"


def standard_sort(
    x: KeyArray | list[Key],
    kind: StandardSortKind = StandardSortKind.QUICKSORT,
    counter: OpCounter | None = None,
) -> KeyArray:
    """Return a sorted copy of `x`. Non-finite keys raise `InputDomainError`."""
    keys = as_key_array(x)
    items = keys.tolist()
    sort_list_in_place(items, kind, counter)
    return np.array(items, dtype=keys.dtype)


def sort_list_in_place(
    a: list[Any], kind: StandardSortKind, counter: OpCounter | None = None
) -> None:
    """Sort a list of already-validated keys in place."""
    arith = comp = logic = assign = mem = 0
    n = len(a)

    introsort = kind is StandardSortKind.INTROSORT
    depth_limit = -1
    if introsort and n > 1:
        depth_limit = 2 * (n.bit_length() - 1)  # 2 * floor(log2 n)
        arith += 2
        assign += 1

    stack = [(0, n, depth_limit)]
    assign += 1
    while stack:
        comp += 1
        lo, hi, depth = stack.pop()
        mem += 1
        assign += 3
        size = hi - lo
        arith += 1
        assign += 1

        comp += 1
        if size < INSERTION_SORT_THRESHOLD:
            arith, comp, logic, assign, mem = _add(
                (arith, comp, logic, assign, mem), _insertion_sort(a, lo, hi)
            )
            continue

        if introsort:
            comp += 1
            if depth == 0:
                arith, comp, logic, assign, mem = _add(
                    (arith, comp, logic, assign, mem), _heapsort(a, lo, hi)
                )
                continue
            depth -= 1
            arith += 1
            assign += 1

        # Median of three: leave a[lo] <= a[mid] <= a[last], with the pivot at the lower middle.
        last = hi - 1
        mid = (lo + last) // 2
        arith += 3
        assign += 2
        for p, q in ((lo, mid), (mid, last), (lo, mid)):
            mem += 2
            comp += 1
            if a[q] < a[p]:
                a[p], a[q] = a[q], a[p]
                assign += 2
        pivot = a[mid]
        mem += 1
        assign += 1

        # Hoare partition of a[lo..last] around the pivot value.
        i = lo - 1
        j = hi
        arith += 1
        assign += 2
        while True:
            i += 1
            start = i
            while a[i] < pivot:
                i += 1
            steps = i - start
            arith += steps + 1
            assign += steps + 1
            comp += steps + 1
            mem += steps + 1

            j -= 1
            start = j
            while a[j] > pivot:
                j -= 1
            steps = start - j
            arith += steps + 1
            assign += steps + 1
            comp += steps + 1
            mem += steps + 1

            comp += 1
            if i >= j:
                break
            a[i], a[j] = a[j], a[i]
            mem += 2
            assign += 2

        stack.append((j + 1, hi, depth))
        stack.append((lo, j + 1, depth))
        arith += 2
        assign += 2
    comp += 1

    if counter is not None:
        counter.charge_all(
            cost(
                arithmetic=arith,
                comparison=comp,
                logical=logic,
                assignment=assign,
                memory_access=mem,
            )
        )


def _insertion_sort(a: list[Any], lo: int, hi: int) -> _Tally:
    shifts = 0
    stopped_at_lo = 0
    for k in range(lo + 1, hi):
        v = a[k]
        m = k - 1
        while m >= lo and a[m] > v:
            a[m + 1] = a[m]
            m -= 1
        a[m + 1] = v
        shifts += k - 1 - m
        if m < lo:
            stopped_at_lo += 1

    outer = max(hi - lo - 1, 0)
    stopped_on_key = outer - stopped_at_lo
    # Per outer step: loop control, v = a[k], m = k - 1, a[m + 1] = v.
    # Per shift: a true two-part test, a[m + 1] = a[m], m -= 1.
    # Each outer step ends on one failing test: one comparison if m ran past lo,
    # otherwise the full two-part test.
    arith = 3 * outer + 2 * shifts
    comp = outer + 1 + 2 * shifts + stopped_at_lo + 2 * stopped_on_key
    logic = shifts + stopped_on_key
    assign = 3 * outer + 2 * shifts
    mem = outer + 2 * shifts + stopped_on_key
    return arith, comp, logic, assign, mem


def _heapsort(a: list[Any], lo: int, hi: int) -> _Tally:
    n = hi - lo
    tally: _Tally = (2, 0, 0, 1, 0)
    for start in range(n // 2 - 1, -1, -1):
        tally = _add(tally, (1, 1, 0, 0, 0))
        tally = _add(tally, _sift_down(a, lo, start, n))
    for end in range(n - 1, 0, -1):
        a[lo], a[lo + end] = a[lo + end], a[lo]
        tally = _add(tally, (2, 1, 0, 2, 2))
        tally = _add(tally, _sift_down(a, lo, 0, end))
    return tally


def _sift_down(a: list[Any], lo: int, root: int, end: int) -> _Tally:
    """Sift a[lo + root] down a max-heap occupying a[lo : lo + end]."""
    arith, comp, logic, assign, mem = 1, 0, 0, 1, 1
    value = a[lo + root]
    while True:
        child = 2 * root + 1
        arith += 2
        assign += 1
        comp += 1
        if child >= end:
            break
        arith += 1
        comp += 1
        if child + 1 < end:
            arith += 2
            mem += 2
            comp += 1
            logic += 1
            if a[lo + child + 1] > a[lo + child]:
                child += 1
                arith += 1
                assign += 1
        arith += 1
        mem += 1
        comp += 1
        if a[lo + child] <= value:
            break
        a[lo + root] = a[lo + child]
        arith += 2
        mem += 1
        assign += 1
        root = child
        assign += 1
    a[lo + root] = value
    arith += 1
    assign += 1
    return arith, comp, logic, assign, mem


def _add(t1: _Tally, t2: _Tally) -> _Tally:
    return (t1[0] + t2[0], t1[1] + t2[1], t1[2] + t2[2], t1[3] + t2[3], t1[4] + t2[4])
