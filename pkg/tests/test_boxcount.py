import random
from fractions import Fraction as F

import pytest

from fracdim.core import DomainError, Interval, ResourceError, parse_set_spec
from fracdim.constructions import egy_cover
from fracdim.boxcount import (
    Grid,
    cell_contains,
    dim_estimate,
    measure_union,
    mesh_count,
    neighborhood_covers,
    verify_bounds,
    verify_cover,
)
from fracdim.bruteforce import brute_occupancy, enumerate_members

UNIT = Interval(F(0), F(1))


# -- grids --------------------------------------------------------------------

def test_grid_cells():
    g = Grid.from_log2(2, UNIT)
    assert g.num_cells == 4
    assert str(g.cell(0)) == "[0,1/4)"
    last = g.cell(3)
    assert last.hi_closed and last.hi == 1
    with pytest.raises(DomainError):
        g.cell(4)
    g2 = Grid.from_width(F(1, 3), Interval(F(0), F(2)))
    assert g2.num_cells == 6


# -- membership oracle --------------------------------------------------------

def test_cell_contains_examples():
    cf1 = parse_set_spec("cf:1")
    assert cell_contains(cf1, Interval(F(1, 8), F(1, 4), True, False))
    assert not cell_contains(cf1, Interval(F(9, 10), F(1)))
    assert cell_contains(parse_set_spec("sumset:2"),
                         Interval(F(99, 100), F(101, 100), True, False))


def test_cell_contains_points():
    assert cell_contains(parse_set_spec("cf:2"), Interval(F(3, 7), F(3, 7)))
    assert not cell_contains(parse_set_spec("cf:3"), Interval(F(3, 7), F(3, 7)))
    assert cell_contains(parse_set_spec("engel:3"), Interval(F(3, 7), F(3, 7)))
    assert cell_contains(parse_set_spec("sumset:1"), Interval(F(0), F(0)))
    assert not cell_contains(parse_set_spec("engel-leq:4"), Interval(F(0), F(0)))
    assert cell_contains(parse_set_spec("egy-leq:1"), Interval(F(0), F(0)))


def test_cell_contains_alpha_validation():
    hd = parse_set_spec("sumset:1:alpha=1/2")
    with pytest.raises(DomainError):
        cell_contains(hd, Interval(F(0), F(1, 2)))


# reference memberships for the two-digit families, solved per leading digit

def ref_unitfrac(J, a0=1, alpha=1, include_zero=False):
    if include_zero and J.contains(0):
        return True
    a = a0
    while True:
        v = F(1, a ** alpha)
        if v < J.lo:
            return False
        if J.contains(v):
            return True
        a += 1


def ref_two_digit(J, kind):
    if kind == "sumset" and (J.contains(0) or ref_unitfrac(J, 1)):
        return True
    if kind == "egy-leq" and (J.contains(0) or ref_unitfrac(J, 1)):
        return True
    if kind == "engel-leq" and ref_unitfrac(J, 1):
        return True
    a = 1
    while True:
        if kind == "cf":
            bstart, val = 2, (lambda b: F(b, a * b + 1))
            increasing = True
        elif kind == "sumset":
            bstart, val = a, (lambda b: F(1, a) + F(1, b))
            increasing = False
        elif kind in ("engel", "engel-leq"):
            if a < 2:
                a += 1
                continue
            bstart, val = a, (lambda b: F(b + 1, a * b))
            increasing = False
        else:  # egy, egy-leq
            if a < 2:
                a += 1
                continue
            bstart, val = a * (a - 1) + 1, (lambda b: F(1, a) + F(1, b))
            increasing = False
        lim = F(1, a)
        vfirst = val(bstart)
        if increasing:
            # values rise from vfirst toward lim
            if lim <= J.lo:
                return False
            if J.lo < lim <= J.hi and vfirst <= J.hi:
                return True
            if vfirst <= J.hi:
                b = bstart
                while True:
                    v = val(b)
                    if v > J.hi:
                        break
                    if J.contains(v):
                        return True
                    b += 1
        else:
            # values fall from vfirst toward lim
            if vfirst < J.lo:
                return False
            if J.lo <= lim < J.hi:
                return True
            if lim < J.lo:
                b = bstart
                while True:
                    v = val(b)
                    if v < J.lo:
                        break
                    if J.contains(v):
                        return True
                    b += 1
        a += 1


@pytest.mark.parametrize("spec,kind", [
    ("cf:2", "cf"), ("sumset:2", "sumset"), ("engel:2", "engel"),
    ("engel-leq:2", "engel-leq"), ("egy:2", "egy"), ("egy-leq:2", "egy-leq"),
])
def test_two_digit_oracles_match_reference(spec, kind):
    sd = parse_set_spec(spec)
    rng = random.Random(hash(spec) & 0xFFFF)
    for _ in range(600):
        d = rng.choice([16, 64, 256, 1024])
        k = rng.randrange(0, d)
        w = rng.choice([1, 1, 2, 5])
        J = Interval(F(k, d), F(k + w, d),
                     rng.random() < 0.8, rng.random() < 0.2)
        if J.lo == 0:
            continue
        assert cell_contains(sd, J) == ref_two_digit(J, kind), J


def test_one_digit_oracles_match_reference():
    rng = random.Random(5150)
    for _ in range(800):
        d = rng.choice([16, 128, 1024])
        k = rng.randrange(0, d)
        J = Interval(F(k, d), F(k + rng.choice([1, 3]), d),
                     rng.random() < 0.8, rng.random() < 0.2)
        assert cell_contains(parse_set_spec("sumset:1"), J) == \
            ref_unitfrac(J, 1, include_zero=True)
        assert cell_contains(parse_set_spec("egy-leq:1"), J) == \
            ref_unitfrac(J, 1, include_zero=True)
        assert cell_contains(parse_set_spec("sumset:1:alpha=2"), J) == \
            ref_unitfrac(J, 1, alpha=2, include_zero=True)
        if J.lo > 0:
            assert cell_contains(parse_set_spec("cf:1"), J) == ref_unitfrac(J, 2)
            for spec in ("egy:1", "engel:1", "engel-leq:1"):
                assert cell_contains(parse_set_spec(spec), J) == ref_unitfrac(J, 1)


# -- mesh counting ------------------------------------------------------------

def test_mesh_examples():
    assert mesh_count(parse_set_spec("sumset:1"),
                      Grid.from_width(F(1, 16), UNIT)).occupied_cells == 8
    assert mesh_count(parse_set_spec("cf:1"),
                      Grid.from_width(F(1, 16), UNIT)).occupied_cells == 7
    assert mesh_count(parse_set_spec("cf:1"),
                      Grid.from_width(F(1), UNIT)).occupied_cells == 1


def closed_form_unit_cells(j, a0=1, alpha=1):
    """Occupied cells of {1/a^alpha : a >= a0} on the 2^-j grid over [0,1]."""
    K = 1 << j
    cells = set()
    a = a0
    while True:
        apow = a ** alpha
        idx = min(K // apow, K - 1)
        cells.add(idx)
        if idx == 0:
            return len(cells)
        a += 1


@pytest.mark.parametrize("j", [4, 7, 10, 13])
def test_mesh_matches_closed_form_single_digit(j):
    grid = Grid.from_log2(j, UNIT)
    assert mesh_count(parse_set_spec("cf:1"), grid).occupied_cells == \
        closed_form_unit_cells(j, a0=2)
    want = closed_form_unit_cells(j, a0=1)
    for spec in ("sumset:1", "egy:1", "egy-leq:1", "engel:1", "engel-leq:1"):
        assert mesh_count(parse_set_spec(spec), grid).occupied_cells == want
    assert mesh_count(parse_set_spec("sumset:1:alpha=2"), grid).occupied_cells \
        == closed_form_unit_cells(j, a0=1, alpha=2)


def test_mesh_monotone_and_subset_consistent():
    prev = {}
    for j in range(3, 10):
        grid = Grid.from_log2(j, UNIT)
        counts = {spec: mesh_count(parse_set_spec(spec), grid).occupied_cells
                  for spec in ("egy:2", "egy-leq:2", "engel:2", "engel-leq:2")}
        grid2 = Grid.from_log2(j, Interval(F(0), F(2)))
        counts["sumset:2"] = mesh_count(parse_set_spec("sumset:2"),
                                        grid2).occupied_cells
        # subset relations between the families
        assert counts["egy:2"] <= counts["egy-leq:2"] <= counts["sumset:2"]
        assert counts["engel:2"] <= counts["engel-leq:2"]
        for spec, c in counts.items():
            if spec in prev:
                assert prev[spec] <= c <= 2 * prev[spec]
        prev = counts


def test_mesh_deterministic_across_workers():
    sd = parse_set_spec("engel:2")
    grid = Grid.from_log2(12, UNIT)
    serial = mesh_count(sd, grid, workers=1).occupied_cells
    parallel = mesh_count(sd, grid, workers=2).occupied_cells
    assert serial == parallel


def test_mesh_guards():
    with pytest.raises(ResourceError):
        mesh_count(parse_set_spec("cf:1"),
                   Grid.from_width(F(1, 1 << 27), UNIT))
    with pytest.raises(ResourceError):
        mesh_count(parse_set_spec("egy:2"), Grid.from_log2(17, UNIT))
    with pytest.raises(ResourceError):
        mesh_count(parse_set_spec("egy-leq:4"), Grid.from_log2(4, UNIT))


def test_dim_estimate():
    fit = dim_estimate(parse_set_spec("sumset:1"), 4, 12)
    assert 0.45 <= fit.slope <= 0.58
    assert len(fit.counts) == 9 and len(fit.per_step_slopes) == 8
    assert fit.residual >= 0
    with pytest.raises(DomainError):
        dim_estimate(parse_set_spec("sumset:1"), 6, 6)


# -- brute-force cross-check ---------------------------------------------------

@pytest.mark.parametrize("spec,cap", [
    ("cf:1", 64), ("cf:2", 64), ("egy:2", 2048), ("egy-leq:2", 2048),
    ("engel:2", 2048), ("engel-leq:2", 2048), ("sumset:2", 2048),
])
def test_brute_force_hits_are_oracle_hits(spec, cap):
    sd = parse_set_spec(spec)
    grid = Grid.from_log2(8, sd.default_domain())
    for k in brute_occupancy(sd, grid, cap):
        assert cell_contains(sd, grid.cell(k)), (spec, k)


def test_enumerate_members_sane():
    vals = set(enumerate_members(parse_set_spec("engel:2"), 12))
    assert F(3, 4) in vals and F(2, 3) in vals          # [2,2], [2,3]
    assert F(1, 2) not in vals                          # length 1
    vals = set(enumerate_members(parse_set_spec("egy:2"), 50))
    assert F(4, 5) not in vals                          # greedy length 3
    assert F(1, 2) not in vals                          # greedy length 1
    assert F(1, 2) + F(1, 3) in vals
    assert F(1, 2) + F(1, 7) in vals
    vals = set(enumerate_members(parse_set_spec("sumset:2"), 10))
    assert F(2, 3) in vals and F(0) in vals and F(2) in vals


# -- covers, neighborhoods, measure, bounds ------------------------------------

def test_verify_cover():
    cover = egy_cover(2, 2)
    pts = [F(0), F(1, 2), F(1, 2) + F(1, 3), F(2)]
    assert verify_cover(pts, cover)
    assert not verify_cover([F(1, 2)], [])
    assert verify_cover([F(0)], egy_cover(3, 5))


def test_neighborhood_covers():
    assert neighborhood_covers(2, 2, F(1, 64))
    assert neighborhood_covers(1, 3, F(1, 9))
    with pytest.raises(DomainError):
        neighborhood_covers(1, 2, F(1, 2))   # step above the tolerance


def test_measure_union():
    assert measure_union([Interval(F(0), F(1, 2)),
                          Interval(F(1, 4), F(3, 4))]) == F(3, 4)
    assert measure_union([]) == 0
    cover = egy_cover(1, 2)
    swept = measure_union([e.interval for e in cover])
    naive = sum(e.interval.length for e in cover)
    assert swept <= naive
    # rasterization oracle on a fine rational grid
    rng = random.Random(77)
    for _ in range(50):
        ivs = []
        for _ in range(rng.randint(1, 6)):
            a = F(rng.randint(0, 40), 16)
            b = a + F(rng.randint(0, 24), 16)
            ivs.append(Interval(a, b))
        got = measure_union(ivs)
        step = F(1, 64)
        covered = sum(1 for k in range(0, 64 * 5)
                      if any(iv.lo <= k * step and (k + 1) * step <= iv.hi
                             for iv in ivs))
        # rasterization undercounts by at most 2 cells per interval
        assert covered * step <= got <= covered * step + 2 * len(ivs) * step


def test_verify_bounds_examples():
    chk = verify_bounds("cf", 1, 4)
    assert chk.cells == 7 and chk.ok and 43 < float(chk.bound) < 43.2
    chk = verify_bounds("sumset", 1, 4)
    assert chk.cells == 8 and chk.bound == 8 and chk.ok
    chk = verify_bounds("engel", 1, 2)
    assert chk.cells == 4 and chk.bound == 8 and chk.ok
    with pytest.raises(DomainError):
        verify_bounds("nope", 1, 2)
