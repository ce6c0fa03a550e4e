import itertools

import numpy as np
import pytest

from logcrit.lattice import convex_hull
from logcrit.poly import (AffineLatticeMap, LaurentPolynomial, apply_lattice_map, from_roots, newton_polygon,
                          shift_w, t_, truncate)

from conftest import C, W, Z, f1


def brute_hull(points):
    """Vertices of the hull by the extreme-point test (no point is a convex
    combination of two others on a supporting line)."""
    pts = sorted(set(points))
    out = []
    for p in pts:
        others = [q for q in pts if q != p]
        # p is a vertex iff some direction makes it the unique maximizer
        for a, b in itertools.product(range(-7, 8), repeat=2):
            v = a * p[0] + b * p[1]
            if all(a * q[0] + b * q[1] < v for q in others):
                out.append(p)
                break
    return sorted(out)


def test_newton_polygon_examples():
    assert newton_polygon(LaurentPolynomial.monomial((2, 3))).vertices == ((2, 3),)
    assert sorted(newton_polygon(f1()).vertices) == brute_hull(f1().support())
    assert sorted(newton_polygon(f1()).vertices) == [(0, 0), (0, 1), (1, 1), (2, 0)]
    assert sorted(newton_polygon(Z + W + C(1)).vertices) == [(0, 0), (0, 1), (1, 0)]


def test_hull_matches_brute_force_on_random_sets():
    rng = np.random.default_rng(0)
    for _ in range(50):
        pts = [tuple(int(x) for x in rng.integers(-4, 5, 2)) for _ in range(rng.integers(3, 12))]
        if len(set(pts)) < 3:
            continue
        assert sorted(convex_hull(pts)) == brute_hull(pts)


def test_truncate():
    e = truncate(f1(), ((0, 1), (1, 1)))
    assert e.almost_equal(W * Z + C(2.6) * W)
    assert truncate(f1(), newton_polygon(f1())).almost_equal(f1())
    assert truncate(Z + W + C(1), (1, 0)).almost_equal(Z)


def test_lattice_maps():
    zw = Z * W
    swap = AffineLatticeMap.linear([[0, 1], [1, 0]])
    assert apply_lattice_map(zw, swap).almost_equal(zw)
    assert apply_lattice_map(Z, AffineLatticeMap.linear([[1, 0], [1, 1]])).almost_equal(Z * W)
    f = f1()
    assert apply_lattice_map(f, AffineLatticeMap.identity(2, (1, 0))).almost_equal(Z * f)
    with pytest.raises(ValueError):
        AffineLatticeMap.linear([[2, 0], [0, 1]])
    m = AffineLatticeMap.linear([[2, 1], [1, 1]], (3, -1))
    assert m.compose(m.inverse()) == AffineLatticeMap.identity(2)


def test_shift_w():
    assert shift_w(W * W).almost_equal(W * W + C(2) * W + C(1))
    assert shift_w(W - C(1)).almost_equal(W)
    a, b, c, d = 1.3 - 0.4j, 0.7 + 0.5j, -0.9 + 0.6j, 0.4 + 1.1j
    z, w, t = (LaurentPolynomial.var(v, 3) for v in "zwt")
    k = lambda x: LaurentPolynomial.constant(x, 3)
    one = k(1)
    f = k(c) * t + z * ((w - one) * (w - one + k(b)) + k(d) * z * (w - one) + k(a) * z * z)
    want = k(c) * t + z * (w * (w + k(b)) + k(d) * z * w + k(a) * z * z)
    assert shift_w(f).almost_equal(want)
    assert t_().almost_equal(t)


def test_calculus_and_evaluation():
    assert (Z * Z * W).partial("z").almost_equal(C(2) * Z * W)
    assert (Z + W + C(1)).evaluate((-1, 0)) == 0
    f = f1()
    for w in (0.3, 2 + 1j, -7.0):
        assert abs(f.evaluate((-1, w)) - 1.6 * w) < 1e-12


def test_json_round_trip():
    f = f1() + C(0.5j) * Z ** 3 * W
    g = LaurentPolynomial.from_json(f.to_json())
    assert g.almost_equal(f, 0.0)


def test_from_roots():
    p = from_roots([-1, -10, -100], var="w")
    assert p.almost_equal((W + C(1)) * (W + C(10)) * (W + C(100)))
