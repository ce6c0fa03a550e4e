import math

import numpy as np
import pytest

from logcrit.lattice import ConvexLift, LatticePolygon
from logcrit.poly import LaurentPolynomial
from logcrit.tropical import classify, extrapolate, log_t, verify_appendix_case, verify_midpoint_theorem
from logcrit.viro import ViroFamily



def test_log_t():
    t = 0.01
    # Log_t = -log|.|/log t, so t^k maps to -k
    assert np.allclose(log_t((t, t * t), t), (-1, -2))
    assert np.allclose(log_t((1 / t, t**-0.5), t), (1, 0.5))
    assert np.allclose(log_t((1, 1), t), (0, 0))
    with pytest.raises(ValueError):
        log_t((1, 1), 2.0)
    with pytest.raises(ValueError):
        log_t((0, 1), 0.1)


def test_extrapolate_linear_in_inverse_log():
    ts = np.geomspace(1e-3, 1e-9, 7)
    pts = [[0.5 + 2 / math.log(t), -1 + 0.3 / math.log(t)] for t in ts]
    assert np.allclose(extrapolate(ts, pts), (0.5, -1))


def test_classify(fam_ftilde):
    assert classify((0.0, 0.5), fam_ftilde)[0] == "midpoint"
    assert classify((0.0, 1.01), fam_ftilde)[0] == "vertex"
    assert classify((3.0, 3.0), fam_ftilde)[0] == "other"


def test_single_cell_has_no_midpoints():
    rng = np.random.default_rng(8)
    dom = LatticePolygon.hull([(0, 0), (2, 0), (0, 2)])
    f = LaurentPolynomial({e: complex(*rng.normal(size=2)) for e in dom.lattice_points()})
    fam = ViroFamily(f, ConvexLift.from_function(dom, lambda p: 0))
    rep = verify_midpoint_theorem(fam, list(np.geomspace(1e-3, 1e-6, 4)))
    assert rep.ok
    assert rep.expected_counts == {}
    assert all(s.kind == "vertex" for s in rep.strands)
    assert len(rep.strands) == 6


def test_midpoints_ftilde(fam_ftilde):
    rep = verify_midpoint_theorem(fam_ftilde)
    assert rep.ok, rep.to_json()
    assert rep.midpoint_counts == {0: 2}


def test_appendix_report_shape():
    rep = verify_appendix_case()
    assert rep.log_degenerate
    assert abs(rep.z_slope - 1 / 3) <= 0.02
    assert rep.alpha_cubed_error < 0.05  # alpha^3 = -c/(4a)
    js = rep.to_json()
    assert set(js["checks"]) == {"z_slope", "x_limit", "alpha_claimed", "gamma_slope", "log_degenerate"}
