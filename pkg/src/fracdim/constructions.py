"""Constructive approximators, cover enumeration and covering-number bounds.

Three ingredients feed the box-counting experiments:

* approximators that place an expansion of prescribed length within a proven
  distance of any target rational (continued fraction, greedy Egyptian and
  Engel variants);
* the explicit interval cover of the m-fold unit-fraction sumset, indexed by
  nondecreasing words whose i-th digit is capped at n^(2^(i-1));
* closed-form upper bounds for covering numbers at the natural scales, the
  continued-fraction one evaluated with a certified rational upper bound on
  the natural logarithm so it can never under-approximate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import DomainError, Interval, Rational, Word, WordKind, word_product
from .expansions import cf_eval, egy_eval, engel_eval


@dataclass(frozen=True)
class CoverContext:
    """Target length m and scale base n parameterizing the cover machinery."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError(f"target length must be >= 1, got {self.m}")
        if self.n < 2:
            raise DomainError(f"scale base must be >= 2, got {self.n}")


@dataclass(frozen=True)
class CoverElement:
    """One interval of the Egyptian sumset cover, tagged with its index word."""

    word: Word
    interval: Interval


# ---------------------------------------------------------------------------
# Approximators
# ---------------------------------------------------------------------------

def cf_near_unit_fraction(n: int, eps: Rational, m: int) -> tuple[Word, Rational]:
    """Length-m continued fraction word within eps of 1/n.

    First digit n, remaining digits all ceil(2/eps) (clamped to >= 2 so the
    word stays canonical even for large eps).  For m = 1 the word is [n]
    itself, which requires n >= 2.
    """
    eps = Fraction(eps)
    if n < 1:
        raise DomainError("n must be >= 1")
    if m < 1:
        raise DomainError("m must be >= 1")
    if eps <= 0:
        raise DomainError("eps must be positive")
    if m == 1:
        if n == 1:
            raise DomainError("no canonical length-1 word evaluates to 1")
        word = Word((n,), WordKind.CF)
        return word, Fraction(1, n)
    filler = max(2, -(-2 * eps.denominator // eps.numerator))  # ceil(2/eps)
    word = Word((n,) + (filler,) * (m - 1), WordKind.CF)
    value = cf_eval(word)
    if abs(value - Fraction(1, n)) >= eps:
        raise AssertionError("constructed word misses its proximity target")
    return word, value


def egy_approximate(x: Rational, n: int, m: int) -> tuple[Word, Rational]:
    """Greedy Egyptian word of length exactly m within n^(-2^m) of x.

    Requires 0 < x < 1/n.  Runs the greedy algorithm for up to m steps; if it
    terminates early at k < m the word is padded with a_{k+1} =
    max(a_k^3, n^(2^(m+1))) and cubes thereafter, which keeps the word greedy
    for its own value.  Termination at exactly k = m gives y = x.
    """
    x = Fraction(x)
    if n < 1 or m < 1:
        raise DomainError("n and m must be >= 1")
    if not (0 < x * n < 1):
        raise DomainError(f"egy_approximate requires 0 < x < 1/{n}, got {x}")
    digits: list[int] = []
    rem = x
    while rem and len(digits) < m:
        a = -(-rem.denominator // rem.numerator)
        digits.append(a)
        rem -= Fraction(1, a)
    if rem == 0 and len(digits) < m:
        # greedy finished early: pad with fast-growing digits
        pad = max(digits[-1] ** 3, n ** (2 ** (m + 1)))
        while len(digits) < m:
            digits.append(pad)
            pad = pad ** 3
    word = Word(tuple(digits), WordKind.EGY)
    y = egy_eval(word)
    bound = Fraction(1, n ** (2 ** m))
    if abs(x - y) > bound:
        raise AssertionError("approximation bound violated")
    return word, y


def engel_approximate(x: Rational, n: int, m: int) -> tuple[Word, Rational]:
    """Engel word of length exactly m within n^(-m-1) of x.

    Requires 0 < x < 1/n.  Runs the Engel iteration for up to m digits; early
    termination at k < m pads every remaining position with the constant
    max(a_k, m * n^(m+1)).  The padded word is still the Engel expansion of
    its own value.
    """
    x = Fraction(x)
    if n < 1 or m < 1:
        raise DomainError("n and m must be >= 1")
    if not (0 < x * n < 1):
        raise DomainError(f"engel_approximate requires 0 < x < 1/{n}, got {x}")
    digits: list[int] = []
    rem = x
    while rem and len(digits) < m:
        a = -(-rem.denominator // rem.numerator)
        digits.append(a)
        rem = a * rem - 1
    if rem == 0 and len(digits) < m:
        pad = max(digits[-1], m * n ** (m + 1))
        digits.extend([pad] * (m - len(digits)))
    word = Word(tuple(digits), WordKind.ENG)
    y = engel_eval(word)
    bound = Fraction(1, n ** (m + 1))
    if abs(x - y) > bound:
        raise AssertionError("approximation bound violated")
    return word, y


# ---------------------------------------------------------------------------
# Digit-product budgets for the continued-fraction cover
# ---------------------------------------------------------------------------

def cf_within_budget(a: Word, ctx: CoverContext) -> bool:
    """True iff the digit product of a stays within n^m."""
    return word_product(a) <= ctx.n ** ctx.m


def cf_headroom(a: Word, ctx: CoverContext) -> Rational:
    """Remaining digit-product budget n^m / product(a); exact.

    Only defined for words within budget; the empty word has headroom n^m.
    """
    prod = word_product(a)
    cap = ctx.n ** ctx.m
    if prod > cap:
        raise DomainError(f"word {a} exceeds the digit-product cap {cap}")
    return Fraction(cap, prod)


# ---------------------------------------------------------------------------
# The Egyptian sumset cover
# ---------------------------------------------------------------------------

def egy_cover_digit_caps(k: int, n: int) -> list[int]:
    """Digit caps n^(2^(i-1)) for positions i = 1..k."""
    return [n ** (2 ** i) for i in range(k)]


def enumerate_egy_cover_words(k: int, n: int) -> list[Word]:
    """All nondecreasing length-k words with i-th digit <= n^(2^(i-1)).

    k = 0 yields just the empty word.  Deterministic lexicographic order.
    """
    if k < 0:
        raise DomainError("word length must be >= 0")
    if n < 2:
        raise DomainError("scale base must be >= 2")
    caps = egy_cover_digit_caps(k, n)
    out: list[Word] = []

    def rec(prefix: list[int], i: int) -> None:
        if i == k:
            out.append(Word(tuple(prefix), WordKind.ENG))
            return
        start = prefix[-1] if prefix else 1
        for d in range(start, caps[i] + 1):
            prefix.append(d)
            rec(prefix, i + 1)
            prefix.pop()

    rec([], 0)
    return out


def egy_cover(m: int, n: int) -> list[CoverElement]:
    """Closed-interval cover of the m-fold unit-fraction sumset.

    One element per capped nondecreasing word of each length k = 0..m: the
    interval starts at the word's reciprocal sum and has length m * n^(-2^k).
    The empty word contributes [0, m/n].
    """
    if m < 1:
        raise DomainError("m must be >= 1")
    if n < 2:
        raise DomainError("n must be >= 2")
    elements: list[CoverElement] = []
    for k in range(m + 1):
        width = Fraction(m, n ** (2 ** k))
        for word in enumerate_egy_cover_words(k, n):
            lo = egy_eval(word) if len(word) else Fraction(0)
            elements.append(CoverElement(word, Interval(lo, lo + width)))
    return elements


# ---------------------------------------------------------------------------
# Digit caps for the Engel cover
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerRootCap:
    """The real root (limit/ratio)^(1/power), exposed only through exact
    integer comparisons: t <= cap iff t^power * scaled <= limit."""

    scaled: int   # digit product of the prefix
    limit: int    # n^(m+1)
    power: int    # m - k + 1 for a prefix of length k

    def compare_to_integer(self, t: int) -> int:
        """Sign of (t - cap): -1, 0 or +1, computed without real arithmetic."""
        if t < 0:
            return -1
        lhs = t ** self.power * self.scaled
        if lhs < self.limit:
            return -1
        if lhs == self.limit:
            return 0
        return 1

    def admits(self, t: int) -> bool:
        return self.compare_to_integer(t) <= 0

    def __float__(self) -> float:
        return float((self.limit / self.scaled) ** (1.0 / self.power))


def engel_within_budget(a: Word, ctx: CoverContext) -> bool:
    """True iff product(a) * last(a)^(m-k+1) <= n^(m+1); empty word passes."""
    k = len(a)
    if k > ctx.m:
        return False
    if k == 0:
        return True
    return word_product(a) * a.last ** (ctx.m - k + 1) <= ctx.n ** (ctx.m + 1)


def engel_digit_cap(a: Word, ctx: CoverContext) -> IntegerRootCap:
    """Exact threshold for the next Engel digit of a budget-respecting word.

    For a prefix of length k the admissible next digits t >= last(a) are
    exactly those with t^(m-k+1) * product(a) <= n^(m+1); the returned object
    performs that comparison.  The empty word's cap equals n.
    """
    if not engel_within_budget(a, ctx):
        raise DomainError(f"word {a} exceeds the Engel digit budget")
    k = len(a)
    return IntegerRootCap(
        scaled=word_product(a),
        limit=ctx.n ** (ctx.m + 1),
        power=ctx.m - k + 1,
    )


# ---------------------------------------------------------------------------
# Certified natural logarithm and the closed-form covering bounds
# ---------------------------------------------------------------------------

def _atanh_upper(num: int, den: int, err_den: int) -> Fraction:
    """Rational upper bound on atanh(num/den) with error < 1/err_den.

    Partial sums of the odd power series are lower bounds; the geometric tail
    bound is added to stay above the true value.
    """
    z = Fraction(num, den)
    z2 = z * z
    term = z
    total = Fraction(0)
    k = 0
    while True:
        total += term / (2 * k + 1)
        term *= z2
        k += 1
        tail = term / ((2 * k + 1) * (1 - z2))
        if tail * err_den < 1:
            return total + tail


def ln_upper(n: int, err_den: int = 10 ** 7) -> Fraction:
    """Certified rational upper bound on ln(n), within 1/err_den of the truth.

    Reduces n to [1,2) by powers of two: ln n = k ln 2 + ln(n / 2^k), each
    piece bounded above through the atanh series with z <= 1/3.
    """
    if n < 1:
        raise DomainError("ln_upper requires n >= 1")
    if n == 1:
        return Fraction(0)
    k = n.bit_length() - 1  # 2^k <= n < 2^(k+1)
    budget = err_den * (k + 2)
    ln2 = _atanh_upper(1, 3, budget) * 2
    # ln(n/2^k) = 2 atanh((n - 2^k) / (n + 2^k)), argument in [0, 1/3)
    rest = _atanh_upper(n - (1 << k), n + (1 << k), budget) * 2
    return k * ln2 + rest


def bound_cf(m: int, n: int) -> Rational:
    """Covering bound (2 m ln n + 8)^m * n^m at scale n^(-2m), rounded up.

    Uses the certified upper bound on ln n, so the result over-approximates
    and never under-approximates the true expression.
    """
    if m < 1 or n < 2:
        raise DomainError("bound_cf requires m >= 1 and n >= 2")
    return (2 * m * ln_upper(n) + 8) ** m * n ** m


def bound_sumset(m: int, n: int) -> int:
    """Covering bound m(m+1) n^(2^m - 1) at scale n^(-2^m)."""
    if m < 1 or n < 2:
        raise DomainError("bound_sumset requires m >= 1 and n >= 2")
    return m * (m + 1) * n ** (2 ** m - 1)


def bound_engel(m: int, n: int) -> int:
    """Covering bound (3m+1)^m n^m at scale n^(-m-1)."""
    if m < 1 or n < 2:
        raise DomainError("bound_engel requires m >= 1 and n >= 2")
    return (3 * m + 1) ** m * n ** m


# ---------------------------------------------------------------------------
# Reproducible rational sampling used by the verification suites
# ---------------------------------------------------------------------------

def sample_rationals(n: int, count: int, seed: int, q_max: int = 10 ** 6) -> list[Fraction]:
    """Deterministic pseudo-random rationals in (0, 1/n).

    Generator: random.Random(seed); denominators q drawn log-uniformly from
    [n+1, q_max] (round(exp(uniform(...)))), numerators uniformly from
    [1, q-1], rejected unless p/q < 1/n.  The draw order is fixed, so a given
    (n, count, seed, q_max) always yields the same list.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = random.Random(seed)
    lo, hi = math.log(n + 1), math.log(q_max)
    out: list[Fraction] = []
    while len(out) < count:
        q = int(round(math.exp(rng.uniform(lo, hi))))
        q = min(max(q, n + 1), q_max)
        p = rng.randint(1, q - 1)
        if p * n < q:
            out.append(Fraction(p, q))
    return out
