import numpy as np
import pytest

from logcrit.catalog import build_theorem12_family
from logcrit.lattice import ConvexLift, LatticePolygon
from logcrit.poly import newton_polygon
from logcrit.tropical import appendix_family
from logcrit.viro import (ViroFamily, cell_polynomial, check_log_nondegenerate, check_nondegenerate,
                          evaluate_family, membership_in_U, nodes_of_C0)

from conftest import C, W, Z, f1


def test_evaluate_family(fam_ftilde):
    base = fam_ftilde.base
    assert evaluate_family(fam_ftilde, 1).almost_equal(base)
    t = 0.003
    want = W * (Z + C(2.6 + 0.5j)) + (Z + C(2.5 + 0.5j)) * (Z + C(1 + 0.5j)) + C(t) * W * W
    assert evaluate_family(fam_ftilde, t).almost_equal(want)
    flat = ViroFamily(base, ConvexLift.from_function(fam_ftilde.lift.domain, lambda p: 0))
    assert evaluate_family(flat, 1e-5).almost_equal(base)
    with pytest.raises(ValueError):
        evaluate_family(fam_ftilde, 0)


def test_cells_have_their_own_newton_polygon(fam_ftilde, fam_weight2):
    for fam in (fam_ftilde, fam_weight2):
        for k, cell in enumerate(fam.cells):
            assert newton_polygon(cell_polynomial(fam, k)) == cell


def test_nondegenerate(fam_ftilde):
    assert check_nondegenerate(fam_ftilde).ok
    assert check_nondegenerate(appendix_family(1.3 - 0.4j, 0.7 + 0.5j, -0.9 + 0.6j, 0.4 + 1.1j)).ok
    f = W + (Z + C(1)) * (Z + C(1))
    dom = newton_polygon(f)
    bad = ViroFamily(f, ConvexLift.from_function(dom, lambda p: 0))
    rep = check_nondegenerate(bad)
    assert not rep.ok and not rep.cells[0].transverse


def test_log_nondegenerate(fam_ftilde):
    assert check_log_nondegenerate(fam_ftilde).ok
    app = appendix_family(1.3 - 0.4j, 0.7 + 0.5j, -0.9 + 0.6j, 0.4 + 1.1j)
    assert not check_log_nondegenerate(app).ok
    assert check_log_nondegenerate(build_theorem12_family(3, 1)).ok


def test_real_patchwork_is_log_degenerate():
    # real coefficients put the inflection values of each cell on RP^1
    dom = LatticePolygon.hull([(0, 0), (2, 0), (0, 2)])
    fam = ViroFamily(f1() + W * W, ConvexLift.from_function(dom, lambda p: 1 if p == (0, 2) else 0))
    assert check_nondegenerate(fam).ok
    assert not check_log_nondegenerate(fam).ok


def test_nodes(fam_ftilde, fam_weight2):
    (nd,) = nodes_of_C0(fam_ftilde)
    assert sorted(nd.edge) == [(0, 1), (1, 1)]
    # xi is the character z^d at the node, d = (+-1, 0) the edge direction
    assert abs(nd.xi ** nd.direction[0] - (-2.6 - 0.5j)) < 1e-12
    nodes = nodes_of_C0(fam_weight2)
    assert len(nodes) == 2 and all(n.weight == 2 for n in nodes)
    flat = ViroFamily(Z + W + C(1), ConvexLift.from_function(newton_polygon(Z + W + C(1)), lambda p: 0))
    assert nodes_of_C0(flat) == []


def test_membership(fam_ftilde):
    assert membership_in_U(fam_ftilde, 0.003).ok
    with pytest.raises(ValueError, match="outside certified disc"):
        membership_in_U(fam_ftilde, 0.2)


def test_membership_fails_on_critical_ray(fam_ftilde):
    args = np.linspace(0, 2 * np.pi, 48, endpoint=False)
    ok = [membership_in_U(fam_ftilde, 1e-3 * np.exp(1j * a)).ok for a in args]
    assert 0 < sum(ok) < len(ok)
    # away from the critical rays the answer is stable under 1% changes of |t|
    for a, good in zip(args, ok):
        if good:
            assert membership_in_U(fam_ftilde, 1.01e-3 * np.exp(1j * a)).ok
            break


def test_family_json(fam_weight2):
    again = ViroFamily.from_json(fam_weight2.to_json())
    assert again.base.almost_equal(fam_weight2.base, 0.0)
    assert again.lift == fam_weight2.lift
