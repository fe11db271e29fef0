"""Verification suites wired to the CLI `verify` command.

Each suite runs a family of exact checks and returns one CheckResult per
check; the CLI renders them as a PASS/FAIL table and exits nonzero on any
failure.  Everything is deterministic given (max_denom, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from .core import SetDescriptor, SetFamily, Word, WordKind, word_product
from .expansions import (
    cf_eval,
    cf_expand,
    egy_eval,
    egy_expand,
    engel_eval,
    engel_expand,
    is_greedy_admissible,
)
from .constructions import (
    CoverContext,
    cf_headroom,
    cf_within_budget,
    egy_approximate,
    egy_cover,
    engel_approximate,
    enumerate_egy_cover_words,
    sample_rationals,
)
from .boxcount import Grid, cell_contains, verify_bounds, verify_cover
from .bruteforce import brute_occupancy

DEFAULT_SEED = 1729
DEFAULT_MAX_DENOM = 500


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _cf_words(max_len: int, max_digit: int) -> list[tuple[int, ...]]:
    """All digit tuples of length 1..max_len with last digit >= 2."""
    out: list[tuple[int, ...]] = []
    for k in range(1, max_len + 1):
        for prefix in product(range(1, max_digit + 1), repeat=k - 1):
            for last in range(2, max_digit + 1):
                out.append(prefix + (last,))
    return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_roundtrip(max_denom: int, seed: int) -> list[CheckResult]:
    """Exact expand/eval round trips over all reduced p/q up to max_denom."""
    cf_bad = egy_bad = engel_bad = 0
    checked = 0
    for q in range(1, max_denom + 1):
        for p in range(1, q + 1):
            if math.gcd(p, q) != 1:
                continue
            x = Fraction(p, q)
            checked += 1
            if p < q:
                w = cf_expand(x)
                if cf_eval(w) != x or w.digits[-1] < 2:
                    cf_bad += 1
            w = egy_expand(x)
            if (egy_eval(w) != x
                    or any(a >= b for a, b in zip(w.digits, w.digits[1:]))
                    or not is_greedy_admissible(w)):
                egy_bad += 1
            w = engel_expand(x)
            if (engel_eval(w) != x
                    or any(a > b for a, b in zip(w.digits, w.digits[1:]))):
                engel_bad += 1
    return [
        CheckResult("cf-roundtrip", cf_bad == 0,
                    f"{checked} rationals, {cf_bad} failures"),
        CheckResult("egy-roundtrip", egy_bad == 0,
                    f"{checked} rationals, {egy_bad} failures"),
        CheckResult("engel-roundtrip", engel_bad == 0,
                    f"{checked} rationals, {engel_bad} failures"),
    ]


def suite_gaps(max_denom: int, seed: int) -> list[CheckResult]:
    """Parent-gap bound and the prefix-proximity bound for capped words."""
    bad = total = 0
    for digits in _cf_words(4, 6):
        total += 1
        g = cf_eval(digits)
        gp = cf_eval(digits[:-1])
        gap = abs(g - gp)
        if not (0 < gap <= Fraction(1, word_product(digits) * word_product(digits[:-1]))):
            bad += 1
    results = [CheckResult("parent-gap-bound", bad == 0,
                           f"{total} words, {bad} failures")]
    # proximity: within-budget prefix a, digit l > headroom, any completion b
    # of length m stays within headroom / n^(2m) of the prefix value
    bad2 = total2 = 0
    for m, n in product((1, 2, 3), (2, 3, 4)):
        ctx = CoverContext(m, n)
        for k in range(0, m):
            for prefix in product(range(1, n ** m + 1), repeat=k):
                w = Word(prefix, WordKind.CF)
                if not cf_within_budget(w, ctx):
                    continue
                theta = cf_headroom(w, ctx)
                g_pref = cf_eval(prefix)
                l0 = int(theta) + 1  # smallest integer above the headroom
                for ell in range(l0, l0 + 21):
                    free = m - k - 1
                    for tail in product(range(1, 11), repeat=free):
                        word = prefix + (ell,) + tail
                        if word[-1] < 2:
                            continue
                        total2 += 1
                        if abs(cf_eval(word) - g_pref) > theta / n ** (2 * m):
                            bad2 += 1
    results.append(CheckResult("prefix-proximity-bound", bad2 == 0,
                               f"{total2} completions, {bad2} failures"))
    return results


def suite_ordering(max_denom: int, seed: int) -> list[CheckResult]:
    """Alternating order of parent, extension, word and decremented word."""
    bad = total = 0
    exts = [t + (last,) for k in (0, 1)
            for t in product(range(1, 6), repeat=k)
            for last in range(2, 6)]
    for digits in _cf_words(3, 5):
        k = len(digits)
        g = cf_eval(digits)
        gp = cf_eval(digits[:-1])
        gm = cf_eval(digits[:-1] + (digits[-1] - 1,)) if digits[-1] >= 3 else None
        for ext in exts:
            total += 1
            ge = cf_eval(digits + ext)
            if k % 2 == 1:
                ok = gp < ge < g and (gm is None or g < gm)
            else:
                ok = g < ge < gp and (gm is None or gm < g)
            if not ok:
                bad += 1
    return [CheckResult("parity-ordering", bad == 0,
                        f"{total} comparisons, {bad} failures")]


def suite_egy_approx(max_denom: int, seed: int) -> list[CheckResult]:
    """Greedy approximation: length exactly m, error <= n^(-2^m), greedy word."""
    results = []
    for n in (2, 3, 4, 5):
        for m in (1, 2, 3):
            bad = 0
            tol = Fraction(1, n ** (2 ** m))
            for x in sample_rationals(n, 200, seed + 31 * n + m):
                word, y = egy_approximate(x, n, m)
                if (len(word) != m or abs(x - y) > tol
                        or not is_greedy_admissible(word)
                        or egy_eval(word) != y):
                    bad += 1
            results.append(CheckResult(f"egy-approx-n{n}-m{m}", bad == 0,
                                       f"200 samples, {bad} failures"))
    return results


def suite_engel_approx(max_denom: int, seed: int) -> list[CheckResult]:
    """Engel approximation: canonical length-m word, error <= n^(-m-1)."""
    results = []
    for n in range(2, 9):
        for m in range(1, 5):
            bad = 0
            tol = Fraction(1, n ** (m + 1))
            for x in sample_rationals(n, 200, seed + 41 * n + m):
                word, y = engel_approximate(x, n, m)
                if (len(word) != m or abs(x - y) > tol
                        or engel_expand(y).digits != word.digits):
                    bad += 1
            results.append(CheckResult(f"engel-approx-n{n}-m{m}", bad == 0,
                                       f"200 samples, {bad} failures"))
    return results


def suite_covers(max_denom: int, seed: int) -> list[CheckResult]:
    """Cover-word cardinality bounds and sumset coverage up to denominator 100."""
    results = []
    for k in range(0, 4):
        for n in (2, 3):
            card = len(enumerate_egy_cover_words(k, n))
            bound = n ** (2 ** k - 1)
            results.append(CheckResult(
                f"cover-words-k{k}-n{n}", card <= bound, f"{card} <= {bound}"))
    for m in (1, 2):
        points = _sumset_points(m, 100)
        for n in (2, 3):
            cov = egy_cover(m, n)
            ok = verify_cover(points, cov)
            results.append(CheckResult(
                f"cover-contains-sumset-m{m}-n{n}", ok,
                f"{len(points)} points vs {len(cov)} intervals"))
    return results


def _sumset_points(m: int, cap: int) -> list[Fraction]:
    pts = {Fraction(0)}
    def rec(start: int, left: int, acc: Fraction) -> None:
        pts.add(acc)
        if left == 0:
            return
        for t in range(start, cap + 1):
            rec(t, left - 1, acc + Fraction(1, t))
    rec(1, m, Fraction(0))
    return sorted(pts)


def suite_bounds(max_denom: int, seed: int) -> list[CheckResult]:
    """Mesh counts against twice the closed-form covering bounds."""
    results = []
    for m in (1, 2):
        for n in range(2, 7):
            chk = verify_bounds("cf", m, n)
            results.append(CheckResult(
                f"bound-cf-m{m}-n{n}", chk.ok,
                f"{chk.cells} <= 2 * {float(chk.bound):.1f}"))
    for m in (1, 2):
        for n in range(2, 6):
            chk = verify_bounds("sumset", m, n)
            results.append(CheckResult(
                f"bound-sumset-m{m}-n{n}", chk.ok,
                f"{chk.cells} <= 2 * {chk.bound}"))
    for m in (1, 2, 3):
        for n in range(2, 9):
            chk = verify_bounds("engel", m, n)
            results.append(CheckResult(
                f"bound-engel-m{m}-n{n}", chk.ok,
                f"{chk.cells} <= 2 * {chk.bound}"))
    return results


_ORACLE_CAPS = {
    SetFamily.CF: 64,
    SetFamily.EGY_GREEDY: 4096,
    SetFamily.EGY_LEQ: 4096,
    SetFamily.ENGEL: 4096,
    SetFamily.ENGEL_LEQ: 4096,
    SetFamily.SUMSET: 4096,
}


def suite_oracle(max_denom: int, seed: int) -> list[CheckResult]:
    """Brute-force members must land only in cells the oracle reports."""
    results = []
    for fam in SetFamily:
        cap = _ORACLE_CAPS[fam]
        for m in (1, 2):
            sd = SetDescriptor(fam, m)
            dom = sd.default_domain()
            # enumerate once at the finest grid; coarser hits follow by
            # halving the cell index (power-of-two grids anchored at 0)
            fine = brute_occupancy(sd, Grid.from_log2(10, dom), cap)
            missed = checked = 0
            for j in range(2, 11):
                grid = Grid.from_log2(j, dom)
                hits = {k >> (10 - j) for k in fine}
                checked += len(hits)
                for k in hits:
                    if not cell_contains(sd, grid.cell(k)):
                        missed += 1
            results.append(CheckResult(
                f"oracle-{fam.value}-m{m}", missed == 0,
                f"{checked} brute-force cells, {missed} missed"))
    return results


SUITES: dict[str, Callable[[int, int], list[CheckResult]]] = {
    "roundtrip": suite_roundtrip,
    "gaps": suite_gaps,
    "ordering": suite_ordering,
    "lemma31": suite_egy_approx,
    "lemma41": suite_engel_approx,
    "covers": suite_covers,
    "bounds": suite_bounds,
    "oracle": suite_oracle,
}


def run_suite(name: str, max_denom: int = DEFAULT_MAX_DENOM,
              seed: int = DEFAULT_SEED) -> list[CheckResult]:
    try:
        fn = SUITES[name]
    except KeyError as exc:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from exc
    return fn(max_denom, seed)
