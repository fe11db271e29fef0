import math
from fractions import Fraction as F
from itertools import combinations_with_replacement

import pytest

from fracdim.core import DomainError, Word, WordKind
from fracdim.expansions import (
    cf_eval,
    cf_expand,
    egy_eval,
    egy_expand,
    engel_eval,
    engel_expand,
    expand,
    gauss_shift,
    is_greedy_admissible,
)


def reduced_fractions(max_denom, include_one=False):
    for q in range(1, max_denom + 1):
        top = q + 1 if include_one else q
        for p in range(1, top):
            if math.gcd(p, q) == 1:
                yield F(p, q)


# -- continued fractions ----------------------------------------------------

def test_cf_examples():
    assert cf_expand(F(1, 2)).digits == (2,)
    assert cf_expand(F(3, 7)).digits == (2, 3)
    assert cf_expand(F(2, 3)).digits == (1, 2)
    assert cf_eval(Word((), WordKind.CF)) == 0
    assert cf_eval([1, 2]) == F(2, 3)
    assert cf_eval([2, 3]) == F(3, 7)


def test_cf_domain():
    for bad in (F(0), F(1), F(3, 2), F(-1, 2)):
        with pytest.raises(DomainError):
            cf_expand(bad)


def test_cf_round_trip_and_canonical_last_digit():
    for x in reduced_fractions(200):
        w = cf_expand(x)
        assert cf_eval(w) == x
        assert w.digits[-1] >= 2


def test_cf_gauss_shift_consistency():
    for x in reduced_fractions(120):
        d, tx = gauss_shift(x)
        w = cf_expand(x)
        assert w.digits[0] == d == int(1 / x)
        if tx:
            assert cf_expand(tx).digits == w.digits[1:]
        else:
            assert len(w) == 1


# -- greedy Egyptian ---------------------------------------------------------

def test_egy_examples():
    assert egy_expand(F(1)).digits == (1,)
    assert egy_expand(F(5, 6)).digits == (2, 3)
    assert egy_expand(F(4, 5)).digits == (2, 4, 20)
    assert egy_eval([2, 4, 20]) == F(4, 5)
    assert egy_eval([1]) == 1
    assert egy_eval([3, 3]) == F(2, 3)   # repeats allowed in evaluation


def test_egy_domain():
    for bad in (F(0), F(11, 10), F(-1, 2)):
        with pytest.raises(DomainError):
            egy_expand(bad)


def test_egy_round_trip_strictly_increasing():
    for x in reduced_fractions(200, include_one=True):
        w = egy_expand(x)
        assert egy_eval(w) == x
        assert all(a < b for a, b in zip(w.digits, w.digits[1:]))
        assert is_greedy_admissible(w)


def test_greedy_admissible_examples():
    assert is_greedy_admissible(Word((2, 4, 20), WordKind.EGY))
    assert not is_greedy_admissible(Word((3, 4), WordKind.EGY))
    assert is_greedy_admissible(Word((2,), WordKind.EGY))
    with pytest.raises(DomainError):
        is_greedy_admissible(Word((2, 3, 3), WordKind.CF))


def test_greedy_admissible_matches_reexpansion():
    # tail-sum characterization and re-expansion must agree
    for digits in [(a, b) for a in range(2, 25) for b in range(a + 1, 60)]:
        w = Word(digits, WordKind.EGY)
        tail_verdict = is_greedy_admissible(w)
        re_verdict = egy_expand(egy_eval(w)).digits == digits
        assert tail_verdict == re_verdict, digits


def test_egy_reexpansion_is_identity_on_admissible_words():
    for a in range(2, 15):
        for b in range(a * (a - 1) + 1, a * (a - 1) + 40):
            w = Word((a, b), WordKind.EGY)
            assert is_greedy_admissible(w)
            assert egy_expand(egy_eval(w)).digits == (a, b)


# -- Engel -------------------------------------------------------------------

def test_engel_examples():
    assert engel_expand(F(1, 2)).digits == (2,)
    assert engel_expand(F(1)).digits == (1,)
    assert engel_expand(F(3, 7)).digits == (3, 4, 7)
    assert engel_eval([3, 4, 7]) == F(3, 7)
    assert engel_eval([2]) == F(1, 2)
    assert engel_eval([2, 2]) == F(3, 4)


def test_engel_domain():
    for bad in (F(0), F(11, 10), F(-1, 3)):
        with pytest.raises(DomainError):
            engel_expand(bad)


def test_engel_round_trip_nondecreasing():
    for x in reduced_fractions(200, include_one=True):
        w = engel_expand(x)
        assert engel_eval(w) == x
        assert all(a <= b for a, b in zip(w.digits, w.digits[1:]))


def test_engel_reexpansion_is_identity_on_nondecreasing_words():
    # every nondecreasing word within (0,1] is its value's expansion
    total = 0
    for k in range(1, 5):
        for digits in combinations_with_replacement(range(1, 13), k):
            v = engel_eval(digits)
            if v > 1:
                continue
            total += 1
            assert engel_expand(v).digits == digits, digits
    assert total == 1365   # all words except [1, ...] with length >= 2


# -- dispatch ----------------------------------------------------------------

def test_expand_dispatch():
    e = expand("engel", F(3, 7))
    assert e.word.digits == (3, 4, 7) and e.length == 3 and e.value == F(3, 7)
    with pytest.raises(DomainError):
        expand("nope", F(1, 2))
