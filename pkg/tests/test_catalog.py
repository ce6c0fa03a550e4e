import numpy as np
import pytest
import sympy as sp

from logcrit.catalog import (
    CHECKS,
    RationalFamilyParams,
    build_rational,
    build_theorem12_family,
    check_harnack_connected,
    check_prop_critloc,
    check_prop_deformation,
    check_prop_eps,
    counting_identity,
    cyclic_position,
    gamma_tilde,
    parametrization,
    random_params,
    run_with_halving,
    theorem12_construction,
    theorem12_indices,
)
from logcrit.critlocus import limit_prediction, monodromy_b0_family
from logcrit.gauss import gauss_pair
from logcrit.poly import LaurentPolynomial
from logcrit.viro import check_log_nondegenerate

SMALL1 = RationalFamilyParams([-10.05, -1], [-10.15])
SHIFTED_D1 = RationalFamilyParams([-15, -10], [-17], -5.0, "G")
SHIFTED_D2 = RationalFamilyParams([-35, -15, -10], [-37, -17], -5.0, "G")


def _poly(d):
    return LaurentPolynomial({tuple(k): complex(v) for k, v in d.items()})


def test_shifted_d1_expansion():
    # roots sit at a - λi, so a factor z + 17 - 5i means λ = -5
    expected = _poly({(1, 1): 1, (0, 1): 17 - 5j, (2, 0): 1, (1, 0): 25 - 10j,
                      (0, 0): (15 - 5j) * (10 - 5j)})
    got = build_rational(SHIFTED_D1)
    assert got.almost_equal(expected)


def test_shifted_d2_expansion():
    z = np.array([0.3 + 0.1j, -2.0 + 1.5j, 4.0 - 3.0j])
    w = np.array([1.0 - 0.5j, 0.2 + 2j, -1.0 + 0j])
    f = build_rational(SHIFTED_D2)
    want = w * (z + 37 - 5j) * (z + 17 - 5j) + (z + 35 - 5j) * (z + 15 - 5j) * (z + 10 - 5j)
    assert np.allclose([f(a, b) for a, b in zip(z, w)], want, rtol=1e-12)


def test_variant_f_is_real():
    f = build_rational(SMALL1)
    assert all(c.imag == 0 for _, c in f.items())


def test_interlacing_violation():
    with pytest.raises(ValueError):
        RationalFamilyParams([-10, -12], [-11])
    with pytest.raises(ValueError):
        RationalFamilyParams([-15, 1], [-17], 0.5, "G")


def test_gamma_tilde_special_values():
    p = RationalFamilyParams([-15, -10], [-17], 0.5, "G")
    assert abs(gamma_tilde(p, 0)) < 1e-14
    assert abs(gamma_tilde(p, 1e8) + 1) < 1e-6
    with pytest.raises(ValueError):
        gamma_tilde(p, p.p_roots()[0])


@pytest.mark.parametrize("params", [SMALL1, SHIFTED_D1, SHIFTED_D2,
                                    RationalFamilyParams([-10.05, -1], [-10.15], 0.2, "H")])
def test_gamma_tilde_matches_gauss_map(params):
    rng = np.random.default_rng(3)
    f = build_rational(params)
    for z in rng.normal(scale=5, size=20) + 1j * rng.normal(scale=5, size=20):
        u, v = gauss_pair(f, parametrization(params, z))
        val = u / v
        assert abs(val - gamma_tilde(params, z)) <= 1e-9 * max(1, abs(val))


def test_prop_eps_d1():
    rep = check_prop_eps(SMALL1)
    assert rep.ok and all(rep.checks.values())


def test_prop_eps_wide_gaps():
    # counts and signs hold; the p_j < b_j < q_j < a_j ordering does not
    rep = check_prop_eps(RationalFamilyParams([-48, -8, -1], [-58, -12]))
    for key in ("zeros", "critical_points", "simple", "negative_values"):
        assert rep.checks[key]


def test_critloc_d1():
    rep = check_prop_critloc(SMALL1)
    assert rep.ok
    assert rep.data["components"] == 2


@pytest.mark.parametrize("lam", [0.5, -0.5])
def test_prop_deformation_d1(lam):
    rep = check_prop_deformation(RationalFamilyParams([-15, -10], [-17], lam, "G"))
    assert rep.ok
    assert rep.data["b0"] == 2


def test_deformation_d2():
    rng = np.random.default_rng(11)
    rep = run_with_halving(check_prop_deformation, random_params(rng, 2, "G"))
    assert rep.ok
    assert rep.data["b0"] == 3


@pytest.mark.parametrize("d,lam", [(1, 0.0), (2, 0.1), (2, 0.0)])
def test_harnack_connected(d, lam):
    a = [-20.05, -10.05, -1][-(d + 1):]
    b = [-20.15, -10.15][-d:]
    rep = check_harnack_connected(RationalFamilyParams(a, b, lam, "H"))
    assert rep.ok
    assert rep.data["b0"] == 1


def test_cyclic_position():
    assert cyclic_position({"x": [0.1], "y": [0.5]}, ["x", "y"])


def test_run_with_halving_records_attempts():
    rep = run_with_halving(check_prop_eps, SMALL1)
    assert rep.ok and rep.data["halvings"] == 0


def test_random_params_interlace():
    rng = np.random.default_rng(0)
    for d in (1, 2, 3):
        for v in ("F", "G", "H"):
            p = random_params(rng, d, v)
            assert p.d == d
            assert (p.lam == 0) == (v == "F")


def test_theorem12_indices():
    assert theorem12_indices(3, 1) == (1, 1, 1 + 1 - 0)
    k, ell, r = theorem12_indices(4, 4)
    assert (k, ell) == (3, 0)
    with pytest.raises(ValueError):
        theorem12_indices(4, 5)
    with pytest.raises(ValueError):
        theorem12_indices(2, 1)


def test_counting_identity_symbolic():
    b, d, ell = sp.symbols("b d ell")
    assert sp.simplify(1 + (b + 1 - d + ell) + (d - 2 - ell) - b) == 0
    for d in range(3, 9):
        for bb in range(1, (d - 1) * (d - 2) // 2 + 2):
            assert counting_identity(d, bb)


@pytest.mark.parametrize("d,b", [(3, 1), (4, 4)])
def test_theorem12_family(d, b):
    con = theorem12_construction(d, b)
    fam = con.family
    assert check_log_nondegenerate(fam).ok
    assert limit_prediction(fam).b0 == b
    assert monodromy_b0_family(fam, 1e-7).b0 == b


def test_build_theorem12_family_bounds():
    with pytest.raises(ValueError):
        build_theorem12_family(3, 3)


def test_checks_registry():
    assert set(CHECKS) == {"eps", "critloc", "deformation", "harnack"}
