from fractions import Fraction

import numpy as np
import pytest

from logcrit.catalog import theorem12_lift
from logcrit.lattice import (ConvexLift, LatticePolygon, Subdivision, certify_convex, dual_tropical_curve,
                             lattice_length, midpoint, mixed_area_twice, subdivision_from_lift)

TRI2 = LatticePolygon.hull([(0, 0), (2, 0), (0, 2)])


def shoelace2(pts):
    return abs(sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1])))


def two_cell_lift():
    return ConvexLift.from_function(TRI2, lambda p: 1 if p == (0, 2) else 0)


def test_twice_area_matches_shoelace():
    rng = np.random.default_rng(1)
    for _ in range(30):
        pts = [tuple(int(x) for x in rng.integers(0, 6, 2)) for _ in range(6)]
        P = LatticePolygon.hull(pts)
        if P.dim < 2:
            continue
        assert P.twice_area() == shoelace2(list(P.vertices))


def test_two_cell_subdivision():
    sub = subdivision_from_lift(two_cell_lift())
    cells = {tuple(sorted(c.vertices)) for c in sub.cells}
    assert cells == {((0, 0), (0, 1), (1, 1), (2, 0)), ((0, 1), (0, 2), (1, 1))}
    assert len(sub.interior_edges) == 1
    assert {tuple(sorted(sub.interior_edges[0].edge))} == {((0, 1), (1, 1))}
    assert certify_convex(two_cell_lift(), sub)


def test_flat_lift_single_cell():
    flat = ConvexLift.from_function(TRI2, lambda p: 0)
    sub = subdivision_from_lift(flat)
    assert sub.cells == [TRI2]
    claim = subdivision_from_lift(two_cell_lift())
    assert not certify_convex(flat, claim)


def test_theorem12_lift_cells():
    for d in (3, 4, 5):
        sub = subdivision_from_lift(theorem12_lift(d))
        want = set()
        for j in range(1, d):
            want.add(LatticePolygon.hull([(1, j - 1), (1, j), (d - j + 1, j - 1), (d - j, j)]))
            want.add(LatticePolygon.hull([(0, j - 1), (1, j - 1), (1, j), (0, j)]))
        want.add(LatticePolygon.hull([(0, d - 1), (1, d - 1), (0, d)]))
        assert set(sub.cells) == want
        assert certify_convex(theorem12_lift(d), Subdivision(sub.parent, sorted(want, key=lambda c: c.vertices)))
        assert sum(c.twice_area() for c in sub.cells) == d * d


def test_dual_tropical_curve_two_cells():
    lift = two_cell_lift()
    tc = dual_tropical_curve(subdivision_from_lift(lift), lift)
    assert sorted(tc.vertices) == [(0, 0), (0, 1)]
    (e,) = tc.bounded_edges()
    assert e.weight == 1
    assert midpoint(e) == (Fraction(0), Fraction(1, 2))
    assert all(d == (0, 0) for d in tc.balancing_defects())


def test_dual_tropical_single_cell():
    tri = LatticePolygon.hull([(0, 0), (1, 0), (0, 1)])
    lift = ConvexLift.from_function(tri, lambda p: 0)
    tc = dual_tropical_curve(subdivision_from_lift(lift), lift)
    assert len(tc.vertices) == 1
    assert not tc.bounded_edges()
    assert sorted(e.direction for e in tc.edges) == [(-1, 0), (0, -1), (1, 1)]
    with pytest.raises(ValueError):
        midpoint(tc.edges[0])


def test_weight_is_lattice_length():
    sq = LatticePolygon.hull([(0, 0), (2, 0), (2, 2), (0, 2)])
    lift = ConvexLift.from_function(sq, lambda p: max(0, p[1] - 1))
    tc = dual_tropical_curve(subdivision_from_lift(lift), lift)
    (e,) = tc.bounded_edges()
    assert e.weight == 2 == lattice_length((0, 1), (2, 1))
    assert all(d == (0, 0) for d in tc.balancing_defects())


def test_mixed_area_bkk():
    line = LatticePolygon.hull([(0, 0), (1, 0), (0, 1)])
    assert mixed_area_twice(line, line) == 1
    assert mixed_area_twice(TRI2, line) == 2
    assert mixed_area_twice(TRI2, TRI2) == 4


def test_lift_validation():
    with pytest.raises(ValueError):
        ConvexLift(TRI2, {(0, 0): 0})
    lift = two_cell_lift()
    assert ConvexLift.from_json(lift.to_json()) == lift
