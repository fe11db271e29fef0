"""Exact grid-occupancy counting for expansion-length sets.

The membership oracles answer "does this interval contain a member of the
set?" exactly, via depth-first search over digit prefixes with exact rational
pruning.  Candidate digit ranges are solved in integer arithmetic (floor and
ceiling of exact rational bounds), never by scanning digits one at a time,
and accumulation points are handled by interior-point shortcuts so queries
near them terminate in O(1) instead of O(1/r).

Mesh (grid-occupancy) counts stand in for minimal covering numbers: with
cells of width r the mesh count M_r and covering number N_r satisfy
N_r <= M_r <= 2 N_r, a factor absorbed by log-log slopes and by the explicit
factor 2 in the bound checks.  Counting is cell-by-cell and deterministic, so
cell ranges may be sharded across workers with bit-identical totals.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    DomainError,
    Interval,
    Rational,
    ResourceError,
    SetDescriptor,
    SetFamily,
    iroot,
)
from .constructions import CoverElement, bound_cf, bound_engel, bound_sumset, egy_approximate
from .expansions import egy_expand, engel_expand

MAX_CELLS = 1 << 26          # hard guard on grid size
EGY_MAX_M = 3                # default guards for the greedy-Egyptian oracle,
EGY_MIN_WIDTH = Fraction(1, 1 << 16)  # whose DFS is the widest per cell


# ---------------------------------------------------------------------------
# Grids and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Partition of a rational interval into width-r cells.

    Cells are half-open [lo + k r, lo + (k+1) r) except the final cell, which
    is closed on the right so the cells partition the domain exactly.
    """

    width: Rational
    domain: Interval
    scale_log2: Optional[int] = None

    def __post_init__(self) -> None:
        w = Fraction(self.width)
        object.__setattr__(self, "width", w)
        if w <= 0:
            raise DomainError("cell width must be positive")
        if self.domain.length <= 0:
            raise DomainError("grid domain must have positive length")

    @classmethod
    def from_log2(cls, j: int, domain: Interval) -> "Grid":
        if j < 1:
            raise DomainError("log2 scale must be >= 1")
        return cls(Fraction(1, 1 << j), domain, scale_log2=j)

    @classmethod
    def from_width(cls, r: Rational, domain: Interval) -> "Grid":
        return cls(Fraction(r), domain, scale_log2=None)

    @property
    def num_cells(self) -> int:
        span = self.domain.length
        return -(-span.numerator * self.width.denominator
                 // (span.denominator * self.width.numerator))

    def cell(self, k: int) -> Interval:
        K = self.num_cells
        if not 0 <= k < K:
            raise DomainError(f"cell index {k} out of range [0, {K})")
        lo = self.domain.lo + k * self.width
        if k == K - 1:
            return Interval(lo, self.domain.hi, True, True)
        return Interval(lo, lo + self.width, True, False)


@dataclass(frozen=True)
class MeshReport:
    """Occupancy count of one grid: #cells meeting the set."""

    set: SetDescriptor
    scale: Rational
    occupied_cells: int
    elapsed: float
    scale_log2: Optional[int] = None
    domain: Optional[Interval] = None


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares slope of log2(count) against the scale exponent."""

    scales: tuple[int, ...]          # log2(1/r) ladder
    counts: tuple[int, ...]
    slope: float
    per_step_slopes: tuple[float, ...]
    residual: float                  # RMS residual of the fit


# ---------------------------------------------------------------------------
# Shared integer comparison helpers.  A window is (lo_n, hi_n, den, lo_c,
# hi_c) representing [lo_n/den, hi_n/den] with closure flags; den > 0.
# ---------------------------------------------------------------------------

def _window_of(J: Interval) -> tuple[int, int, int, bool, bool]:
    d = J.lo.denominator * J.hi.denominator // math.gcd(J.lo.denominator, J.hi.denominator)
    return (
        J.lo.numerator * (d // J.lo.denominator),
        J.hi.numerator * (d // J.hi.denominator),
        d,
        J.lo_closed,
        J.hi_closed,
    )


def _value_in_window(vn: int, vd: int, lo_n: int, hi_n: int, den: int,
                     lo_c: bool, hi_c: bool) -> bool:
    """Is vn/vd inside the window?  vd > 0."""
    a = vn * den - lo_n * vd
    if a < 0 or (a == 0 and not lo_c):
        return False
    b = vn * den - hi_n * vd
    if b > 0 or (b == 0 and not hi_c):
        return False
    return True


def _open_meets_window(an: int, ad: int, bn: int, bd: int,
                       lo_n: int, hi_n: int, den: int,
                       lo_c: bool, hi_c: bool, a_open: bool = True,
                       b_open: bool = True) -> bool:
    """Does the interval (a, b) (flags per a_open/b_open) meet the window?

    a < b is not required to be strict when both ends are closed.
    """
    # effective lower bound: max of a and window lo
    c = an * den - lo_n * ad
    if c > 0 or (c == 0 and (a_open or lo_c)):
        lval_n, lval_d, l_closed = an, ad, not a_open
    else:
        lval_n, lval_d, l_closed = lo_n, den, lo_c
    c = bn * den - hi_n * bd
    if c < 0 or (c == 0 and (b_open or hi_c)):
        uval_n, uval_d, u_closed = bn, bd, not b_open
    else:
        uval_n, uval_d, u_closed = hi_n, den, hi_c
    s = lval_n * uval_d - uval_n * lval_d
    if s < 0:
        return True
    return s == 0 and l_closed and u_closed


# ---------------------------------------------------------------------------
# Continued fraction oracle
#
# Node state: the convergents p/q of the prefix and pp/qq of its parent.
# Appending digit t gives value (t p + pp) / (t q + qq); the values of all
# extensions of the prefix fill the open interval between the prefix value
# and the digit-1 child value, accumulating at the prefix value.  The set of
# reachable values with next digit t (its "cylinder") is the closed interval
# between the t-child and (t+1)-child values; consecutive cylinders tile the
# hull, which is what makes interval batching of candidate digits exact.
# ---------------------------------------------------------------------------

def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _cf_query(m: int, lo_n: int, hi_n: int, den: int, lo_c: bool, hi_c: bool) -> bool:

    def leaf_in(t: int, p: int, q: int, pp: int, qq: int) -> bool:
        return _value_in_window(t * p + pp, t * q + qq, lo_n, hi_n, den, lo_c, hi_c)

    def node(j: int, p: int, q: int, pp: int, qq: int) -> bool:
        # hull of all extension values: the open interval between x = p/q and
        # the digit-1 child y = (p+pp)/(q+qq)
        yn, yd = p + pp, q + qq
        if p * yd < yn * q:
            meets = _open_meets_window(p, q, yn, yd, lo_n, hi_n, den, lo_c, hi_c)
        else:
            meets = _open_meets_window(yn, yd, p, q, lo_n, hi_n, den, lo_c, hi_c)
        if not meets:
            return False
        # accumulation shortcut: extension values approach x from the hull
        # side, and the hull meets the window, so if x lies in the window's
        # closure some extension value lands in the window.
        if lo_n * q <= p * den <= hi_n * q:
            return True
        # Candidate digits t whose cylinders (closed interval between the
        # t-child and (t+1)-child values) meet the window's closure.  Child
        # values v(t) = (t p + pp)/(t q + qq) are strictly monotone toward x:
        # v(t) >= c  <=>  t (c_d p - c_n q) >= c_n qq - c_d pp, and the sign
        # of the t-coefficient equals the sign of x - c, which is nonzero
        # here because x lies outside the window's closure.
        leaf_level = (j + 1 == m)
        tmin = 2 if leaf_level else 1
        a_lo = den * p - lo_n * q
        b_lo = lo_n * qq - den * pp
        a_hi = den * p - hi_n * q
        b_hi = hi_n * qq - den * pp
        if p * yd > yn * q:
            # v increasing toward x, so the window sits below x: x > hi.
            # cyl(t) = [v(t), v(t+1)] meets closure iff v(t) <= hi and
            # v(t+1) >= lo.
            t_top = b_hi // a_hi                      # max t: v(t) <= hi (a_hi > 0)
            s_min = max(1, _ceil_div(b_lo, a_lo))     # min s: v(s) >= lo (a_lo > 0)
            ta, tb = max(tmin, s_min - 1), t_top
        else:
            # v decreasing toward x: x < lo.
            # cyl(t) = [v(t+1), v(t)] meets closure iff v(t) >= lo and
            # v(t+1) <= hi.
            t_top = b_lo // a_lo                      # max t: v(t) >= lo (a_lo < 0)
            s_min = max(1, _ceil_div(b_hi, a_hi))     # min s: v(s) <= hi (a_hi < 0)
            ta, tb = max(tmin, s_min - 1), t_top
        if ta > tb:
            return False
        count = tb - ta + 1
        if leaf_level:
            if count <= 6:
                return any(leaf_in(t, p, q, pp, qq) for t in range(ta, tb + 1))
            # Interior leaf values sit inside the window's closure, and at
            # most one can coincide with each excluded endpoint, so three
            # interior probes suffice; boundaries kept as a safety net.
            return any(leaf_in(t, p, q, pp, qq)
                       for t in (ta + 1, ta + 2, ta + 3, ta, tb))
        if count >= 3:
            # an interior candidate's open cylinder lies inside the window
            # and always contains extension values
            return True
        return any(node(j + 1, t * p + pp, t * q + qq, p, q)
                   for t in range(ta, tb + 1))

    if m < 1:
        raise DomainError("m must be >= 1")
    return node(0, 0, 1, 1, 0)


# ---------------------------------------------------------------------------
# Greedy Egyptian oracle
#
# A value x in (0,1] with greedy digits a_1 < a_2 < ... satisfies, after the
# prefix a_1..a_j with partial sum s, that the remainder u = x - s lies in
# [1/t, 1/(t-1)) where t = a_{j+1}; these half-open cylinders tile the whole
# remainder zone (0, 1/(a_j(a_j - 1))).  The DFS walks greedy prefixes, so
# every accepted witness is greedy by construction and is re-verified by
# re-expansion.  Remainders of any fixed positive length accumulate at 0+,
# which gives the interior-point shortcut.
# ---------------------------------------------------------------------------

def _growth_suffix(first: int, length: int) -> tuple[int, ...]:
    """Greedy-admissible suffix with rapidly growing digits."""
    digs = [first]
    for _ in range(length - 1):
        d = digs[-1]
        digs.append(d * (d - 1) + 1)
    return tuple(digs)


def _egy_canonical(digits: tuple[int, ...], x: Fraction) -> bool:
    if egy_expand(x).digits != digits:
        raise AssertionError(f"greedy witness mismatch for {x}")
    return True


def _egy_query(m: int, leq: bool, lo_n: int, hi_n: int, den: int,
               lo_c: bool, hi_c: bool) -> bool:
    lo = Fraction(lo_n, den)
    hi = Fraction(hi_n, den)

    def in_J(x: Fraction) -> bool:
        if x < lo or x > hi:
            return False
        if x == lo and not lo_c:
            return False
        if x == hi and not hi_c:
            return False
        return True

    def node(digits: tuple[int, ...], s: Fraction) -> bool:
        j = len(digits)
        if leq and in_J(s):
            # x = s is a member of the length-<= m set (length 0 gives x = 0)
            return True if j == 0 else _egy_canonical(digits, s)
        if j == m:
            if leq:
                return False
            return in_J(s) and _egy_canonical(digits, s)
        d = digits[-1] if digits else 0
        if d == 1:
            return False          # the word [1] has remainder 0 only
        if j == 0:
            t_start = 2           # remainders live in (0, 1); u = 1 is the digit-1 point
            if (leq or m == 1) and in_J(Fraction(1)):
                return _egy_canonical((1,), Fraction(1))
            cap_num, cap_den = 1, 1
        else:
            t_start = d * (d - 1) + 1
            cap_num, cap_den = 1, d * (d - 1)
        wlo = lo - s
        whi = hi - s
        # remainders live in (0, cap)
        if whi <= 0 or wlo * cap_den >= cap_num:
            return False
        if wlo <= 0:
            # accumulation at remainder 0+: build an explicit tiny witness
            length = 1 if leq else m - j
            tgt = max(t_start,
                      _ceil_div(whi.denominator, whi.numerator) + 1)
            for _ in range(4):
                suffix = _growth_suffix(tgt, length)
                u = sum((Fraction(1, t) for t in suffix), Fraction(0))
                if 0 < u < whi:
                    return _egy_canonical(digits + suffix, s + u)
                tgt *= 2
            raise AssertionError("failed to place an accumulation witness")
        # candidate digits: cylinders [1/t, 1/(t-1)) meeting [wlo, whi]
        ta = max(t_start, _ceil_div(whi.denominator, whi.numerator))
        tb = (wlo.denominator - 1) // wlo.numerator + 1
        if ta > tb:
            return False
        count = tb - ta + 1
        if count >= 3 and j + 1 < m:
            # an interior child's open cylinder lies inside the window; its
            # subtree accepts through its own accumulation witness
            return node(digits + (ta + 1,), s + Fraction(1, ta + 1))
        if count <= 6:
            return any(node(digits + (t,), s + Fraction(1, t))
                       for t in range(ta, tb + 1))
        # deepest level with a wide range: interior child values lie in the
        # window's closure and at most one hits each excluded endpoint
        return any(node(digits + (t,), s + Fraction(1, t))
                   for t in (ta + 1, ta + 2, ta + 3, ta, tb))

    if m < 1:
        raise DomainError("m must be >= 1")
    return node((), Fraction(0))


# ---------------------------------------------------------------------------
# Engel oracle
#
# After a prefix with value s, digit product P and last digit d, appending
# digits t_1 <= t_2 <= ... (all >= d) adds 1/(P t_1) + 1/(P t_1 t_2) + ...,
# so the subtree values fill part of (s, s + allfill(P, d, L)] where the top
# is attained by repeating d.  Unlike the greedy cylinders these child zones
# do not tile (there are genuine gaps), so candidate digits are scanned over
# their exact solved range; the ranges shrink quadratically toward
# accumulation points, keeping whole-grid scans near-linear in 1/r.
# Witnesses are re-verified against the Engel algorithm.
# ---------------------------------------------------------------------------

def _engel_canonical(digits: tuple[int, ...], num: int, den_: int) -> bool:
    if engel_expand(Fraction(num, den_)).digits != digits:
        raise AssertionError(f"Engel witness mismatch for {num}/{den_}")
    return True


def _engel_query(m: int, leq: bool, lo_n: int, hi_n: int, den: int,
                 lo_c: bool, hi_c: bool) -> bool:
    D = den

    def node(digits: tuple[int, ...], F: int, P: int, d: int) -> bool:
        j = len(digits)
        if j >= 1 and (leq or j == m):
            if _value_in_window(F, P, lo_n, hi_n, D, lo_c, hi_c):
                return _engel_canonical(digits, F, P)
        if j == m:
            return False
        L = m - j
        # subtree values beyond the prefix live in (s, s + allfill]
        if d == 1:
            top_n, top_d = F + L, P
        else:
            dl = d ** L
            top_n = F * (d - 1) * dl + dl - 1
            top_d = P * (d - 1) * dl
        if not _open_meets_window(F, P, top_n, top_d,
                                  lo_n, hi_n, D, lo_c, hi_c,
                                  a_open=True, b_open=False):
            return False
        sD = F * D
        if lo_n * P <= sD < hi_n * P:
            # accumulation at s from above: constant-fill witness
            Hn = hi_n * P - sD                # hi - s = Hn/(D P) > 0
            length = 1 if leq else L
            T = max(d, D // Hn + 2, 2)
            for _ in range(4):
                tl = T ** length
                ext_n, ext_d = tl - 1, P * (T - 1) * tl
                v_n = F * ext_d + ext_n * P
                v_d = P * ext_d
                if _value_in_window(v_n, v_d, lo_n, hi_n, D, lo_c, hi_c):
                    return _engel_canonical(digits + (T,) * length, v_n, v_d)
                T *= 2
            raise AssertionError("failed to place an accumulation witness")
        # here s < lo
        Ln = lo_n * P - sD                    # lo - s = Ln/(D P) > 0
        Hn = hi_n * P - sD                    # hi - s > 0
        if L == 1:
            # leaf digits: s + 1/(P t) must land in the window
            t_min = _ceil_div(D, Hn)
            if t_min * Hn == D and not hi_c:
                t_min += 1
            t_max = D // Ln
            if t_max * Ln == D and not lo_c:
                t_max -= 1
            t_min = max(t_min, d)
            if t_min > t_max:
                return False
            return _engel_canonical(digits + (t_min,), F * t_min + 1, P * t_min)
        # the child whose first term lands exactly on a closed upper endpoint
        if leq and hi_c and D % Hn == 0:
            tb0 = D // Hn
            if tb0 >= d:
                return _engel_canonical(digits + (tb0,), F * tb0 + 1, P * tb0)
        t_lo = max(D // Hn + 1, d)

        def reaches(t: int) -> bool:
            # s + allfill(P, t, L) >= lo, in integers
            if t == 1:
                return L * D >= Ln
            tl = t ** L
            return D * (tl - 1) >= Ln * (t - 1) * tl

        if not reaches(t_lo):
            return False
        lo_t, hi_t = t_lo, max(L * D // Ln + 2, t_lo + 1)
        while hi_t - lo_t > 1:
            mid = (lo_t + hi_t) // 2
            if reaches(mid):
                lo_t = mid
            else:
                hi_t = mid
        for t in range(t_lo, lo_t + 1):
            if node(digits + (t,), F * t + 1, P * t, t):
                return True
        return False

    if m < 1:
        raise DomainError("m must be >= 1")
    return node((), 0, 1, 1)


# ---------------------------------------------------------------------------
# Sumset oracle (m-fold sums of {1/t^alpha} u {0}, alpha a positive integer)
#
# Nondecreasing denominators with partial sum s; with R terms left and
# minimum denominator d, the attainable completions lie in
# [s, s + R/d^alpha], the endpoints attained by stopping and by repeating d.
# Every partial sum is itself a member (zero terms are allowed), which makes
# both the immediate accept and the accumulation shortcut valid.
# ---------------------------------------------------------------------------

def _int_root_ceil(a: int, b: int, k: int) -> int:
    """Smallest t >= 1 with t^k * b >= a (a, b > 0)."""
    t = max(1, iroot(a // b, k))
    while t ** k * b < a:
        t += 1
    while t > 1 and (t - 1) ** k * b >= a:
        t -= 1
    return t


def _int_root_floor(a: int, b: int, k: int) -> int:
    """Largest t >= 0 with t^k * b <= a (b > 0, a >= 0)."""
    t = max(0, iroot(a // b, k))
    while (t + 1) ** k * b <= a:
        t += 1
    while t > 0 and t ** k * b > a:
        t -= 1
    return t


def _sumset_query(m: int, alpha: int, lo_n: int, hi_n: int, den: int,
                  lo_c: bool, hi_c: bool) -> bool:
    D = den

    def node(j: int, Sn: int, Sd: int, d: int) -> bool:
        if _value_in_window(Sn, Sd, lo_n, hi_n, D, lo_c, hi_c):
            return True                        # the partial sum is a member
        if j == m:
            return False
        R = m - j
        dpow = d ** alpha
        if not _open_meets_window(Sn, Sd, Sn * dpow + R * Sd, Sd * dpow,
                                  lo_n, hi_n, D, lo_c, hi_c,
                                  a_open=True, b_open=False):
            return False
        sD = Sn * D
        if lo_n * Sd <= sD < hi_n * Sd:
            return True                        # next terms accumulate at s+
        # here s < lo
        Ln = lo_n * Sd - sD                    # lo - s = Ln/(D Sd) > 0
        Hn = hi_n * Sd - sD
        num = D * Sd
        if R == 1:
            t_min = _int_root_ceil(num, Hn, alpha)
            if t_min ** alpha * Hn == num and not hi_c:
                t_min += 1
            t_max = _int_root_floor(num, Ln, alpha)
            if t_max >= 1 and t_max ** alpha * Ln == num and not lo_c:
                t_max -= 1
            return max(t_min, d) <= t_max
        t_lo = max(d, _int_root_ceil(num, Hn, alpha))
        t_hi = _int_root_floor(R * num, Ln, alpha)
        for t in range(t_lo, t_hi + 1):
            tpow = t ** alpha
            if node(j + 1, Sn * tpow + Sd, Sd * tpow, t):
                return True
        return False

    if m < 1:
        raise DomainError("m must be >= 1")
    return node(0, 0, 1, 1)


# ---------------------------------------------------------------------------
# Public membership and counting API
# ---------------------------------------------------------------------------

_UNIT = Interval(Fraction(0), Fraction(1))


def cell_contains(sd: SetDescriptor, J: Interval) -> bool:
    """Exact: does J contain at least one member of the described set?

    No false positives or negatives; see the per-family oracles above.
    """
    fam = sd.family
    if fam in (SetFamily.CF, SetFamily.EGY_GREEDY, SetFamily.EGY_LEQ,
               SetFamily.ENGEL, SetFamily.ENGEL_LEQ):
        # these sets live inside [0, 1]
        from .core import interval_intersect

        clipped = interval_intersect(J, _UNIT)
        if clipped is None:
            return False
        J = clipped
    lo_n, hi_n, den, lo_c, hi_c = _window_of(J)
    if fam is SetFamily.CF:
        return _cf_query(sd.m, lo_n, hi_n, den, lo_c, hi_c)
    if fam is SetFamily.EGY_GREEDY:
        return _egy_query(sd.m, False, lo_n, hi_n, den, lo_c, hi_c)
    if fam is SetFamily.EGY_LEQ:
        return _egy_query(sd.m, True, lo_n, hi_n, den, lo_c, hi_c)
    if fam is SetFamily.ENGEL:
        return _engel_query(sd.m, False, lo_n, hi_n, den, lo_c, hi_c)
    if fam is SetFamily.ENGEL_LEQ:
        return _engel_query(sd.m, True, lo_n, hi_n, den, lo_c, hi_c)
    if fam is SetFamily.SUMSET:
        if sd.alpha.denominator != 1:
            raise DomainError(
                "sumset membership requires an integer alpha; "
                f"got {sd.alpha} (non-integer powers are irrational)")
        return _sumset_query(sd.m, sd.alpha.numerator, lo_n, hi_n, den, lo_c, hi_c)
    raise DomainError(f"unsupported set family {fam}")  # pragma: no cover


def _count_range(sd: SetDescriptor, grid: Grid, k0: int, k1: int) -> int:
    """Occupied cells with index in [k0, k1); pure, order-independent."""
    fam = sd.family
    m = sd.m
    K = grid.num_cells
    # express every cell bound over one common denominator
    r = grid.width
    lo0 = grid.domain.lo
    hi_end = grid.domain.hi
    den = r.denominator * lo0.denominator // math.gcd(r.denominator, lo0.denominator)
    den = den * hi_end.denominator // math.gcd(den, hi_end.denominator)
    step = r.numerator * (den // r.denominator)
    base = lo0.numerator * (den // lo0.denominator)
    end_n = hi_end.numerator * (den // hi_end.denominator)

    if fam is SetFamily.SUMSET:
        if sd.alpha.denominator != 1:
            raise DomainError("sumset mesh counting requires an integer alpha")
        alpha = sd.alpha.numerator
        query = lambda a, b, bc: _sumset_query(m, alpha, a, b, den, True, bc)
    elif fam is SetFamily.CF:
        query = lambda a, b, bc: _cf_query(m, a, b, den, True, bc)
    elif fam is SetFamily.EGY_GREEDY:
        query = lambda a, b, bc: _egy_query(m, False, a, b, den, True, bc)
    elif fam is SetFamily.EGY_LEQ:
        query = lambda a, b, bc: _egy_query(m, True, a, b, den, True, bc)
    elif fam is SetFamily.ENGEL:
        query = lambda a, b, bc: _engel_query(m, False, a, b, den, True, bc)
    elif fam is SetFamily.ENGEL_LEQ:
        query = lambda a, b, bc: _engel_query(m, True, a, b, den, True, bc)
    else:  # pragma: no cover
        raise DomainError(f"unsupported set family {fam}")

    count = 0
    for k in range(k0, k1):
        a = base + k * step
        if k == K - 1:
            if query(a, end_n, True):
                count += 1
        elif query(a, a + step, False):
            count += 1
    return count


def _resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        env = os.environ.get("FRACDIM_THREADS", "").strip()
        workers = int(env) if env else 1
    if workers == 0:
        workers = os.cpu_count() or 1
    return max(1, workers)


def mesh_count(sd: SetDescriptor, grid: Grid, workers: Optional[int] = None,
               allow_deep: bool = False) -> MeshReport:
    """Count grid cells meeting the set, cell by cell via cell_contains.

    Deterministic: the count is a sum over disjoint index ranges, so any
    worker partitioning yields the identical total.  Guards: at most 2^26
    cells, and the greedy-Egyptian families are limited to m <= 3 and cell
    width >= 2^-16 unless allow_deep is set.
    """
    K = grid.num_cells
    if K > MAX_CELLS:
        raise ResourceError(f"grid has {K} cells, over the {MAX_CELLS} guard")
    if sd.family in (SetFamily.EGY_GREEDY, SetFamily.EGY_LEQ) and not allow_deep:
        if sd.m > EGY_MAX_M or grid.width < EGY_MIN_WIDTH:
            raise ResourceError(
                "greedy-Egyptian mesh counting is limited to m <= "
                f"{EGY_MAX_M} and cell width >= 2^-16 by default")
    nworkers = _resolve_workers(workers)
    start = time.perf_counter()
    if nworkers == 1 or K < 4096:
        total = _count_range(sd, grid, 0, K)
    else:
        chunk = -(-K // (nworkers * 8))
        spans = [(k, min(k + chunk, K)) for k in range(0, K, chunk)]
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            parts = pool.map(_count_range,
                             [sd] * len(spans), [grid] * len(spans),
                             [a for a, _ in spans], [b for _, b in spans])
            total = sum(parts)
    elapsed = time.perf_counter() - start
    return MeshReport(set=sd, scale=grid.width, occupied_cells=total,
                      elapsed=elapsed, scale_log2=grid.scale_log2,
                      domain=grid.domain)


def dim_estimate(sd: SetDescriptor, j_lo: int, j_hi: int,
                 domain: Optional[Interval] = None,
                 workers: Optional[int] = None,
                 allow_deep: bool = False) -> SlopeFit:
    """Least-squares slope of log2(occupied cells) over the 2^-j ladder.

    Also reports per-step slopes (successive difference quotients) as a
    convergence diagnostic, and asserts the refinement sandwich
    M(j) <= M(j+1) <= 2 M(j) across the ladder.
    """
    if j_lo >= j_hi:
        raise DomainError("scale ladder needs j_lo < j_hi")
    dom = domain if domain is not None else sd.default_domain()
    counts: list[int] = []
    for j in range(j_lo, j_hi + 1):
        rep = mesh_count(sd, Grid.from_log2(j, dom), workers=workers,
                         allow_deep=allow_deep)
        counts.append(rep.occupied_cells)
    for c0, c1 in zip(counts, counts[1:]):
        if not c0 <= c1 <= 2 * c0:
            raise AssertionError(
                f"mesh refinement sandwich violated: {c0} -> {c1}")
    js = list(range(j_lo, j_hi + 1))
    ys = [math.log2(c) for c in counts]
    n = len(js)
    xbar = sum(js) / n
    ybar = sum(ys) / n
    sxx = sum((x - xbar) ** 2 for x in js)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(js, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    residual = math.sqrt(sum((y - (slope * x + intercept)) ** 2
                             for x, y in zip(js, ys)) / n)
    steps = tuple(y1 - y0 for y0, y1 in zip(ys, ys[1:]))
    return SlopeFit(scales=tuple(js), counts=tuple(counts), slope=slope,
                    per_step_slopes=steps, residual=residual)


# ---------------------------------------------------------------------------
# Covers, neighborhoods, measures, bound checks
# ---------------------------------------------------------------------------

def verify_cover(points: Iterable[Rational], cover: Iterable[CoverElement]) -> bool:
    """True iff every point lies in at least one cover interval."""
    elements = list(cover)
    for p in points:
        if not any(e.interval.contains(p) for e in elements):
            return False
    return True


def neighborhood_covers(m: int, n: int, grid_step: Rational) -> bool:
    """Sampled certificate that every point of (0, 1/n) sits within
    n^(-2^m) of a length-m greedy Egyptian value.

    Samples the grid {k * grid_step} inside (0, 1/n) and runs the
    length-m approximator on each; grid_step must not exceed n^(-2^m).
    """
    step = Fraction(grid_step)
    if step <= 0:
        raise DomainError("grid step must be positive")
    tol = Fraction(1, n ** (2 ** m))
    if step > tol:
        raise DomainError(f"grid step {step} exceeds the tolerance {tol}")
    k = 1
    while k * step * n < 1:
        x = k * step
        _, y = egy_approximate(x, n, m)
        if abs(x - y) > tol:
            return False
        k += 1
    return True


def measure_union(intervals: Iterable[Interval]) -> Rational:
    """Exact total length of a union of intervals (sort and sweep)."""
    ivs = sorted(((iv.lo, iv.hi) for iv in intervals), key=lambda t: t)
    total = Fraction(0)
    cur_lo: Optional[Fraction] = None
    cur_hi = Fraction(0)
    for lo, hi in ivs:
        if cur_lo is None or lo > cur_hi:
            if cur_lo is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        elif hi > cur_hi:
            cur_hi = hi
    if cur_lo is not None:
        total += cur_hi - cur_lo
    return total


@dataclass(frozen=True)
class BoundCheck:
    """Mesh count against twice the closed-form covering bound."""

    family: str
    m: int
    n: int
    scale: Rational
    cells: int
    bound: Rational
    ok: bool


_BOUND_SETUPS = {
    "cf": (SetFamily.CF, bound_cf, lambda m, n: n ** (2 * m)),
    "sumset": (SetFamily.SUMSET, bound_sumset, lambda m, n: n ** (2 ** m)),
    "engel": (SetFamily.ENGEL_LEQ, bound_engel, lambda m, n: n ** (m + 1)),
}


def verify_bounds(family: str, m: int, n: int,
                  workers: Optional[int] = None) -> BoundCheck:
    """Mesh-count the family at its natural scale and compare with 2x the
    closed-form bound (the factor 2 is the mesh/cover sandwich slack)."""
    try:
        fam, bound_fn, scale_fn = _BOUND_SETUPS[family]
    except KeyError as exc:
        raise DomainError(f"unknown bound family {family!r}") from exc
    sd = SetDescriptor(fam, m)
    r = Fraction(1, scale_fn(m, n))
    grid = Grid.from_width(r, sd.default_domain())
    rep = mesh_count(sd, grid, workers=workers)
    bound = bound_fn(m, n)
    return BoundCheck(family=family, m=m, n=n, scale=r,
                      cells=rep.occupied_cells, bound=bound,
                      ok=rep.occupied_cells <= 2 * bound)
