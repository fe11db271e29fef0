"""Bounded brute-force enumeration of set members.

Independent of the DFS oracles: members are produced by direct enumeration
with a cap on digits (and hence denominators), then binned into grid cells.
Used to cross-check cell_contains one-sidedly: every brute-force hit must be
an oracle hit, while the oracle may legitimately find members whose digits
exceed the enumeration cap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

import numpy as np

from .core import DomainError, SetDescriptor, SetFamily
from .expansions import cf_eval, egy_eval, engel_eval
from .boxcount import Grid


def enumerate_members(sd: SetDescriptor, cap: int) -> Iterator[Fraction]:
    """Yield members whose digits are all <= cap (with repeats possible)."""
    fam, m = sd.family, sd.m
    if fam is SetFamily.CF:
        yield from _cf_members(m, cap)
    elif fam is SetFamily.EGY_GREEDY:
        yield from _egy_members(m, cap)
    elif fam is SetFamily.EGY_LEQ:
        yield Fraction(0)
        for p in range(1, m + 1):
            yield from _egy_members(p, cap)
    elif fam is SetFamily.ENGEL:
        yield from _engel_members(m, cap)
    elif fam is SetFamily.ENGEL_LEQ:
        for p in range(1, m + 1):
            yield from _engel_members(p, cap)
    elif fam is SetFamily.SUMSET:
        if sd.alpha.denominator != 1:
            raise DomainError("sumset enumeration requires an integer alpha")
        yield from _sumset_members(m, sd.alpha.numerator, cap)
    else:  # pragma: no cover
        raise DomainError(f"unsupported family {fam}")


def _cf_members(m: int, cap: int) -> Iterator[Fraction]:
    def rec(prefix: list[int]) -> Iterator[Fraction]:
        if len(prefix) == m:
            yield cf_eval(prefix)
            return
        start = 2 if len(prefix) == m - 1 else 1
        for d in range(start, cap + 1):
            prefix.append(d)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def _egy_members(m: int, cap: int) -> Iterator[Fraction]:
    # greedy words: a_1 >= 2 (or [1] alone), a_{i+1} > a_i (a_i - 1)
    def rec(prefix: list[int]) -> Iterator[Fraction]:
        if len(prefix) == m:
            yield egy_eval(prefix)
            return
        d = prefix[-1]
        for t in range(d * (d - 1) + 1, cap + 1):
            prefix.append(t)
            yield from rec(prefix)
            prefix.pop()

    if m == 1:
        yield Fraction(1)
    for a in range(2, cap + 1):
        yield from rec([a])


def _engel_members(m: int, cap: int) -> Iterator[Fraction]:
    # nondecreasing digits with digit product <= cap; digit 1 only as [1]
    if m == 1:
        yield Fraction(1)

    def rec(prefix: list[int], prod: int) -> Iterator[Fraction]:
        if len(prefix) == m:
            yield engel_eval(prefix)
            return
        d = prefix[-1]
        t = d
        while prod * t <= cap:
            prefix.append(t)
            yield from rec(prefix, prod * t)
            prefix.pop()
            t += 1

    for a in range(2, cap + 1):
        yield from rec([a], a)


def _sumset_members(m: int, alpha: int, cap: int) -> Iterator[Fraction]:
    def rec(start: int, left: int, acc: Fraction) -> Iterator[Fraction]:
        yield acc
        if left == 0:
            return
        for t in range(start, cap + 1):
            yield from rec(t, left - 1, acc + Fraction(1, t ** alpha))

    yield from rec(1, m, Fraction(0))


def brute_occupancy(sd: SetDescriptor, grid: Grid, cap: int) -> set[int]:
    """Cell indices hit by members enumerated up to the digit cap."""
    K = grid.num_cells
    r = grid.width
    lo = grid.domain.lo
    hi = grid.domain.hi
    if (sd.family is SetFamily.SUMSET and sd.m == 2 and lo == 0
            and sd.alpha.denominator == 1):
        return _sumset_pairs_occupancy(sd.alpha.numerator, grid, cap)
    cells: set[int] = set()
    for x in enumerate_members(sd, cap):
        if x < lo or x > hi:
            continue
        k = int((x - lo) / r)
        cells.add(min(k, K - 1))
    return cells


def _sumset_pairs_occupancy(alpha: int, grid: Grid, cap: int) -> set[int]:
    # vectorized: values (a^alpha + b^alpha) / (a^alpha b^alpha), a <= b
    K = grid.num_cells
    rn, rd = grid.width.numerator, grid.width.denominator
    cells: set[int] = {0}  # the empty sum
    b = np.arange(1, cap + 1, dtype=np.int64)
    bpow = b ** alpha
    # single terms
    idx = (rd // (bpow * rn)).astype(np.int64)
    cells.update(int(i) for i in np.unique(np.minimum(idx, K - 1)))
    for a in range(1, cap + 1):
        apow = a ** alpha
        bp = bpow[a - 1:]
        num = (apow + bp) * rd
        den = apow * bp * rn
        idx = num // den
        cells.update(int(i) for i in np.unique(np.minimum(idx, K - 1)))
    return cells
