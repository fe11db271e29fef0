import random
from fractions import Fraction as F

import pytest

from fracdim.core import (
    DomainError,
    Interval,
    SetFamily,
    Word,
    WordKind,
    format_rational,
    interval_intersect,
    iroot,
    parse_rational,
    parse_set_spec,
    word_decrement_last,
    word_parent,
    word_product,
)


def test_parse_rational():
    assert parse_rational("3/7") == F(3, 7)
    assert parse_rational("-3/7") == F(-3, 7)
    assert parse_rational("17") == F(17)
    assert parse_rational(" 4/6 ") == F(2, 3)
    for bad in ("", "x", "1/0", "1/2/3"):
        with pytest.raises(DomainError):
            parse_rational(bad)


def test_format_rational_round_trips():
    for x in (F(0), F(3, 7), F(-5, 9), F(12), F(-4)):
        assert parse_rational(format_rational(x)) == x
    assert format_rational(F(0)) == "0"
    assert format_rational(F(3, 7)) == "3/7"


def test_word_validation():
    Word((2, 3), WordKind.CF)
    Word((1, 1, 5), WordKind.CF)
    Word((2, 3, 10), WordKind.EGY)
    Word((2, 2, 5), WordKind.ENG)
    with pytest.raises(DomainError):
        Word((2, 2), WordKind.EGY)      # not strictly increasing
    with pytest.raises(DomainError):
        Word((3, 2), WordKind.ENG)      # decreasing
    with pytest.raises(DomainError):
        Word((0, 2), WordKind.CF)       # nonpositive digit
    assert str(Word((2, 3), WordKind.CF)) == "[2,3]"
    assert str(Word((), WordKind.CF)) == "[]"


def test_word_parent():
    assert word_parent(Word((2, 3), WordKind.CF)).digits == (2,)
    assert word_parent(Word((5,), WordKind.CF)).digits == ()
    assert word_parent(Word((1, 2, 7), WordKind.CF)).digits == (1, 2)
    with pytest.raises(DomainError):
        word_parent(Word((), WordKind.CF))


def test_word_decrement_last():
    assert word_decrement_last(Word((2, 3), WordKind.CF)).digits == (2, 2)
    assert word_decrement_last(Word((5,), WordKind.CF)).digits == (4,)
    with pytest.raises(DomainError):
        word_decrement_last(Word((1, 2, 1), WordKind.CF))


def test_word_product():
    assert word_product(Word((2, 3), WordKind.CF)) == 6
    assert word_product(Word((), WordKind.CF)) == 1
    assert word_product(Word((4, 4, 4), WordKind.CF)) == 64


def test_parent_of_decrement_matches_parent():
    rng = random.Random(7)
    for _ in range(300):
        digs = tuple(rng.randint(1, 9) for _ in range(rng.randint(1, 5)))
        if digs[-1] < 2:
            continue
        w = Word(digs, WordKind.CF)
        assert word_parent(word_decrement_last(w)) == word_parent(w)


def test_interval_basics():
    iv = Interval(F(0), F(1, 2), True, False)
    assert iv.contains(F(0)) and iv.contains(F(1, 4)) and not iv.contains(F(1, 2))
    assert iv.length == F(1, 2)
    pt = Interval(F(1), F(1))
    assert pt.is_point and pt.contains(1)
    with pytest.raises(DomainError):
        Interval(F(1), F(0))
    with pytest.raises(DomainError):
        Interval(F(1), F(1), True, False)   # degenerate must be closed


def test_interval_intersect_examples():
    a = Interval(F(0), F(1, 2), True, False)
    b = Interval(F(1, 4), F(3, 4), True, False)
    got = interval_intersect(a, b)
    assert (got.lo, got.hi, got.lo_closed, got.hi_closed) == (F(1, 4), F(1, 2), True, False)

    c = Interval(F(1, 2), F(1), True, True)
    assert interval_intersect(a, c) is None   # half-open boundary

    d = Interval(F(0), F(1), True, True)
    e = Interval(F(1), F(2), True, True)
    got = interval_intersect(d, e)
    assert got.is_point and got.lo == 1       # shared closed endpoint


def test_interval_intersect_flag_combinations():
    rng = random.Random(11)
    for _ in range(500):
        vals = sorted(F(rng.randint(0, 12), 8) for _ in range(4))
        a = Interval(vals[0], vals[2] if vals[2] > vals[0] else vals[0] + 1,
                     rng.random() < 0.5, rng.random() < 0.5 or vals[0] == vals[2])
        b = Interval(vals[1], vals[3] if vals[3] > vals[1] else vals[1] + 1,
                     rng.random() < 0.5, rng.random() < 0.5 or vals[1] == vals[3])
        got = interval_intersect(a, b)
        # compare against membership of a dense probe set
        probes = {a.lo, a.hi, b.lo, b.hi}
        probes |= {(p + q) / 2 for p in probes for q in probes}
        for x in probes:
            want = a.contains(x) and b.contains(x)
            have = got is not None and got.contains(x)
            assert want == have, (a, b, x)


def test_rational_arithmetic_cross_multiplication_oracle():
    # Fraction arithmetic must agree with explicit big-integer formulas
    rng = random.Random(23)
    for _ in range(400):
        p, q = rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6)
        r, s = rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6)
        x, y = F(p, q), F(r, s)
        assert x + y == F(p * s + r * q, q * s)
        assert x - y == F(p * s - r * q, q * s)
        assert x * y == F(p * r, q * s)
        if r:
            assert x / y == F(p * s, q * r)
        assert (x < y) == (p * s < r * q)
        assert (x == y) == (p * s == r * q)


def test_set_descriptor():
    sd = parse_set_spec("sumset:2:alpha=1/2")
    assert sd.family is SetFamily.SUMSET and sd.m == 2 and sd.alpha == F(1, 2)
    assert sd.spec_string() == "sumset:2:alpha=1/2"
    assert parse_set_spec("cf:3").spec_string() == "cf:3"
    assert parse_set_spec("engel-leq:2").default_domain().hi == 1
    assert parse_set_spec("sumset:3").default_domain().hi == 3
    for bad in ("cf", "cf:0", "nope:2", "cf:2:alpha=2", "sumset:1:beta=2",
                "sumset:1:alpha=0", "cf:x"):
        with pytest.raises(DomainError):
            parse_set_spec(bad)


def test_iroot():
    for n in list(range(0, 200)) + [10 ** 12, 10 ** 12 + 1, 2 ** 64]:
        for k in (1, 2, 3, 5):
            r = iroot(n, k)
            assert r ** k <= n < (r + 1) ** k
