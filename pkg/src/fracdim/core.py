"""Exact rational values, digit words, intervals and set descriptors.

Everything downstream (expansions, covers, mesh counting) is built on the
types in this module.  All values are immutable and all operations are pure
functions, so they can be shared freely across threads or worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

# The universal exact value type.  Fraction already guarantees the two
# invariants we need: stored reduced, denominator >= 1.
Rational = Fraction

RationalLike = Union[Rational, int]


class DomainError(ValueError):
    """An argument is outside an operation's mathematical domain."""


class ResourceError(RuntimeError):
    """A request exceeds a configured resource guard (e.g. too many cells)."""


# ---------------------------------------------------------------------------
# Rational parsing / printing
# ---------------------------------------------------------------------------

def parse_rational(text: str) -> Rational:
    """Parse "p/q" (optional sign) or a plain integer meaning p/1."""
    s = text.strip()
    if not s:
        raise DomainError("empty rational literal")
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            d = int(den)
            if d == 0:
                raise DomainError(f"zero denominator in {text!r}")
            return Fraction(int(num), d)
        return Fraction(int(s), 1)
    except ValueError as exc:
        raise DomainError(f"malformed rational {text!r}") from exc


def format_rational(x: Rational) -> str:
    """Inverse of parse_rational: "p/q", or a bare integer when q = 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Digit words
# ---------------------------------------------------------------------------

class WordKind(Enum):
    CF = "cf"      # continued fraction digits: arbitrary positive integers
    EGY = "egy"    # Egyptian denominators: strictly increasing
    ENG = "eng"    # Engel digits: nondecreasing

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class Word:
    """A finite sequence of positive integer digits with a kind tag."""

    digits: tuple[int, ...]
    kind: WordKind

    def __post_init__(self) -> None:
        digs = tuple(int(d) for d in self.digits)
        object.__setattr__(self, "digits", digs)
        for d in digs:
            if d < 1:
                raise DomainError(f"digits must be positive, got {d}")
        if self.kind is WordKind.EGY:
            if any(a >= b for a, b in zip(digs, digs[1:])):
                raise DomainError(f"Egyptian word must strictly increase: {digs}")
        elif self.kind is WordKind.ENG:
            if any(a > b for a, b in zip(digs, digs[1:])):
                raise DomainError(f"Engel word must be nondecreasing: {digs}")

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __str__(self) -> str:
        return "[" + ",".join(str(d) for d in self.digits) + "]"

    @property
    def last(self) -> int:
        if not self.digits:
            raise DomainError("empty word has no last digit")
        return self.digits[-1]

    def extended(self, digit: int) -> "Word":
        return Word(self.digits + (int(digit),), self.kind)


def word_parent(a: Word) -> Word:
    """Drop the last digit.  Error on the empty word."""
    if len(a) == 0:
        raise DomainError("empty word has no parent")
    return Word(a.digits[:-1], a.kind)


def word_decrement_last(a: Word) -> Word:
    """Lower the last digit by one.  Requires last digit >= 2."""
    if len(a) == 0:
        raise DomainError("empty word has no last digit")
    if a.digits[-1] < 2:
        raise DomainError("cannot decrement a trailing digit of 1")
    return Word(a.digits[:-1] + (a.digits[-1] - 1,), a.kind)


def word_product(a: Union[Word, Sequence[int]]) -> int:
    """Product of the digits; 1 for the empty word."""
    prod = 1
    for d in a:
        prod *= d
    return prod


# ---------------------------------------------------------------------------
# Intervals with endpoint-closure flags
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Rational interval.  Grid cells are half-open, cover intervals closed."""

    lo: Rational
    hi: Rational
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        lo = Fraction(self.lo)
        hi = Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo > hi:
            raise DomainError(f"interval endpoints out of order: {lo} > {hi}")
        if lo == hi and not (self.lo_closed and self.hi_closed):
            raise DomainError("degenerate interval must be a closed point")

    @property
    def length(self) -> Rational:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: RationalLike) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_rational(self.lo)},{format_rational(self.hi)}{right}"


def interval_intersect(a: Interval, b: Interval) -> Optional[Interval]:
    """Intersection respecting endpoint flags; None when empty."""
    if a.lo > b.lo or (a.lo == b.lo and not a.lo_closed):
        lo, lo_closed = a.lo, a.lo_closed
    elif a.lo == b.lo:
        lo, lo_closed = a.lo, a.lo_closed and b.lo_closed
    else:
        lo, lo_closed = b.lo, b.lo_closed
    if a.hi < b.hi or (a.hi == b.hi and not a.hi_closed):
        hi, hi_closed = a.hi, a.hi_closed
    elif a.hi == b.hi:
        hi, hi_closed = a.hi, a.hi_closed and b.hi_closed
    else:
        hi, hi_closed = b.hi, b.hi_closed
    if lo > hi:
        return None
    if lo == hi and not (lo_closed and hi_closed):
        return None
    return Interval(lo, hi, lo_closed, hi_closed)


# ---------------------------------------------------------------------------
# Set descriptors
# ---------------------------------------------------------------------------

class SetFamily(Enum):
    CF = "cf"                 # continued fraction expansions of length m
    EGY_GREEDY = "egy"        # greedy Egyptian expansions of length m
    EGY_LEQ = "egy-leq"       # greedy Egyptian expansions of length <= m (incl. 0)
    ENGEL = "engel"           # Engel expansions of length m
    ENGEL_LEQ = "engel-leq"   # Engel expansions of length <= m
    SUMSET = "sumset"         # m-fold sums of {1/n^alpha} u {0}

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class SetDescriptor:
    """Symbolic description of a target set; drives the membership oracles."""

    family: SetFamily
    m: int
    alpha: Rational = field(default=Fraction(1))

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError(f"m must be >= 1, got {self.m}")
        alpha = Fraction(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if alpha <= 0:
            raise DomainError(f"alpha must be positive, got {alpha}")
        if self.family is not SetFamily.SUMSET and alpha != 1:
            raise DomainError("alpha is only meaningful for sumset families")

    def default_domain(self) -> Interval:
        if self.family is SetFamily.SUMSET:
            return Interval(Fraction(0), Fraction(self.m))
        return Interval(Fraction(0), Fraction(1))

    def spec_string(self) -> str:
        base = f"{self.family.value}:{self.m}"
        if self.family is SetFamily.SUMSET and self.alpha != 1:
            base += f":alpha={format_rational(self.alpha)}"
        return base

    def __str__(self) -> str:
        return self.spec_string()


def parse_set_spec(spec: str) -> SetDescriptor:
    """Parse "cf:2", "engel-leq:3", "sumset:2:alpha=1/2", ..."""
    parts = spec.strip().split(":")
    if len(parts) < 2:
        raise DomainError(f"malformed set spec {spec!r}: expected FAMILY:M")
    name = parts[0].strip().lower()
    try:
        family = SetFamily(name)
    except ValueError as exc:
        names = ", ".join(f.value for f in SetFamily)
        raise DomainError(f"unknown set family {name!r} (expected one of {names})") from exc
    try:
        m = int(parts[1])
    except ValueError as exc:
        raise DomainError(f"malformed m in set spec {spec!r}") from exc
    alpha = Fraction(1)
    if len(parts) > 3:
        raise DomainError(f"too many fields in set spec {spec!r}")
    if len(parts) == 3:
        if family is not SetFamily.SUMSET:
            raise DomainError("alpha is only supported for sumset:M:alpha=P/Q")
        key, _, value = parts[2].partition("=")
        if key.strip() != "alpha" or not value:
            raise DomainError(f"malformed alpha field in set spec {spec!r}")
        alpha = parse_rational(value)
    try:
        return SetDescriptor(family, m, alpha)
    except DomainError:
        raise
    except ValueError as exc:  # pragma: no cover - defensive
        raise DomainError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Small exact-integer helpers shared by the enumeration machinery
# ---------------------------------------------------------------------------

def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer, exactly."""
    if n < 0:
        raise DomainError("iroot of a negative integer")
    if k < 1:
        raise DomainError("iroot order must be >= 1")
    if n in (0, 1) or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    r = 1 << ((n.bit_length() + k - 1) // k)  # upper seed
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r ** k > n:
        r -= 1
    return r
