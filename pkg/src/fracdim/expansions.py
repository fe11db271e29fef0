"""The three expansion algorithms with exact evaluators.

Continued fractions use the shift x -> 1/x mod 1; greedy Egyptian repeatedly
takes the largest admissible unit fraction; Engel iterates x -> a*x - 1 with
a the ceiling of the reciprocal.  All three terminate on every rational input
and round-trip exactly through their evaluators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import DomainError, Rational, Word, WordKind

Digits = Union[Word, Sequence[int]]


@dataclass(frozen=True)
class Expansion:
    """A word together with its exact value and length."""

    word: Word
    value: Rational
    length: int


def _digits(a: Digits) -> tuple[int, ...]:
    if isinstance(a, Word):
        return a.digits
    return tuple(int(d) for d in a)


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

def cf_expand(x: Rational) -> Word:
    """Canonical continued fraction word of x in (0,1); last digit >= 2.

    The shift iteration on p/q is the Euclidean algorithm, so it terminates
    and never emits a trailing digit of 1.
    """
    x = Fraction(x)
    if not (0 < x < 1):
        raise DomainError(f"cf_expand requires 0 < x < 1, got {x}")
    p, q = x.numerator, x.denominator
    digits = []
    while p:
        digits.append(q // p)
        p, q = q % p, p
    return Word(tuple(digits), WordKind.CF)


def cf_eval(a: Digits) -> Rational:
    """Exact value of a finite continued fraction word; empty word -> 0."""
    num, den = 0, 1  # value accumulated bottom-up as num/den
    for d in reversed(_digits(a)):
        if d < 1:
            raise DomainError("continued fraction digits must be >= 1")
        num, den = den, d * den + num
    return Fraction(num, den)


def gauss_shift(x: Rational) -> tuple[int, Rational]:
    """One step of the digit shift: returns (first digit, 1/x mod 1)."""
    x = Fraction(x)
    if not (0 < x < 1):
        raise DomainError("gauss_shift requires 0 < x < 1")
    p, q = x.numerator, x.denominator
    return q // p, Fraction(q % p, p)


# ---------------------------------------------------------------------------
# Greedy Egyptian fractions
# ---------------------------------------------------------------------------

def egy_expand(x: Rational) -> Word:
    """Greedy Egyptian word of x in (0,1]: strictly increasing denominators.

    Each denominator is the ceiling of the reciprocal remainder; remainders
    have strictly decreasing numerators, so at most numerator(x) digits are
    produced.
    """
    x = Fraction(x)
    if not (0 < x <= 1):
        raise DomainError(f"egy_expand requires 0 < x <= 1, got {x}")
    rem = x
    digits = []
    while rem:
        a = -(-rem.denominator // rem.numerator)  # ceil of the reciprocal
        digits.append(a)
        rem -= Fraction(1, a)
    return Word(tuple(digits), WordKind.EGY)


def egy_eval(a: Digits) -> Rational:
    """Sum of reciprocals of the digits (repeats allowed, used for sumsets)."""
    total = Fraction(0)
    for d in _digits(a):
        if d < 1:
            raise DomainError("denominators must be >= 1")
        total += Fraction(1, d)
    return total


def is_greedy_admissible(a: Word) -> bool:
    """True iff a strictly increasing word is its own greedy expansion.

    Characterized by the tail sums t_l = sum_{i>=l} 1/a_i: each must satisfy
    1/a_l <= t_l < 1/(a_l - 1), with the leading digit 1 case relaxed to
    t_1 <= 1.  Re-expanding the value gives the same verdict; the test suite
    cross-checks the two.
    """
    digs = _digits(a)
    if any(d < 1 for d in digs):
        raise DomainError("denominators must be >= 1")
    if any(u >= v for u, v in zip(digs, digs[1:])):
        raise DomainError("greedy admissibility is defined for strictly increasing words")
    tail = Fraction(0)
    for d in reversed(digs):
        tail += Fraction(1, d)
        if d == 1:
            if tail > 1:
                return False
        elif not tail < Fraction(1, d - 1):
            return False
    return True


# ---------------------------------------------------------------------------
# Engel fractions
# ---------------------------------------------------------------------------

def engel_expand(x: Rational) -> Word:
    """Engel word of x in (0,1]: the unique nondecreasing digit sequence.

    Iterates x -> a*x - 1 with a = ceil(1/x); the remainder numerators over
    the fixed denominator strictly decrease, so the loop terminates.
    """
    x = Fraction(x)
    if not (0 < x <= 1):
        raise DomainError(f"engel_expand requires 0 < x <= 1, got {x}")
    digits = []
    while x:
        p, q = x.numerator, x.denominator
        a = -(-q // p)  # ceil(1/x)
        digits.append(a)
        x = a * x - 1
    return Word(tuple(digits), WordKind.ENG)


def engel_eval(a: Digits) -> Rational:
    """Exact value 1/a_1 + 1/(a_1 a_2) + ... + 1/(a_1 ... a_k)."""
    num, prod = 0, 1  # running numerator over denominator prod
    for d in _digits(a):
        if d < 1:
            raise DomainError("Engel digits must be >= 1")
        num = num * d + 1
        prod *= d
    return Fraction(num, prod)


# ---------------------------------------------------------------------------
# Convenience dispatch used by the CLI
# ---------------------------------------------------------------------------

_EXPANDERS = {
    "cf": (cf_expand, cf_eval),
    "egy": (egy_expand, egy_eval),
    "engel": (engel_expand, engel_eval),
}


def expand(kind: str, x: Rational) -> Expansion:
    """Run the named expansion and package word, value and length."""
    try:
        expander, evaluator = _EXPANDERS[kind]
    except KeyError as exc:
        raise DomainError(f"unknown expansion kind {kind!r}") from exc
    word = expander(x)
    value = evaluator(word)
    if value != Fraction(x):
        raise AssertionError(f"round trip failed for {kind} expansion of {x}")
    return Expansion(word, value, len(word))
