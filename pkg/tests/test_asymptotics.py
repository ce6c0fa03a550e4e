import pytest

from logcrit.asymptotics import (branch_data, initial_form, normalize_at_node, tropisms,
                                 verify_lemma41, verify_vorder_monomials)
from logcrit.poly import LaurentPolynomial, shift_w
from logcrit.gauss import inflection_numerator
from logcrit.tropical import appendix_family
from logcrit.viro import nodes_of_C0

from test_gauss import appendix_original

APP = (1.3 - 0.4j, 0.7 + 0.5j, -0.9 + 0.6j, 0.4 + 1.1j)


def test_normalization_ftilde(fam_ftilde):
    (node,) = nodes_of_C0(fam_ftilde)
    norm = normalize_at_node(fam_ftilde, node)
    assert norm.kappa == 1
    assert norm.ell >= 2
    rep = verify_lemma41(norm)
    assert rep.ok, rep.checks
    assert norm.a * norm.b * norm.c != 0


def test_normalization_weight2(fam_weight2):
    for node in nodes_of_C0(fam_weight2):
        norm = normalize_at_node(fam_weight2, node)
        assert verify_lemma41(norm).ok


def test_appendix_node_refused():
    fam = appendix_family(*APP)
    with pytest.raises(ValueError):
        for node in nodes_of_C0(fam):
            normalize_at_node(fam, node)


def test_branch_data(fam_ftilde):
    (node,) = nodes_of_C0(fam_ftilde)
    norm = normalize_at_node(fam_ftilde, node)
    bd = branch_data(norm)
    assert bd.alpha_residual(norm) < 1e-10
    assert bd.exponents == (1, int(2 * norm.delta), 2)
    g1, g2 = bd.predicted_gamma(norm, 1e-4)
    assert abs(g1 + g2) < 1e-12 * abs(g1)
    assert abs(abs(g1) - abs(bd.lam) * 1e-2) < 1e-12


def test_vorder_monomials(fam_ftilde, fam_weight2):
    for fam in (fam_ftilde, fam_weight2):
        for node in nodes_of_C0(fam):
            rep = verify_vorder_monomials(normalize_at_node(fam, node))
            assert rep.ok, rep.checks


def test_initial_forms_example():
    z, w, t = (LaurentPolynomial.var(v, 3) for v in "zwt")
    one = LaurentPolynomial.constant(1, 3)
    g = one + z + w + t
    assert initial_form(g, (2, 1, 1)).almost_equal(one)
    assert initial_form(g, (0, 1, 1)).almost_equal(one + z)
    vs = [tr.v for tr in tropisms(g, g)]
    assert (2, 1, 1) not in vs and (0, 1, 1) in vs


def test_tropisms():
    z, w, t = (LaurentPolynomial.var(v, 3) for v in "zwt")
    assert (1, 1, 1) in [tr.v for tr in tropisms(z - t, w - t)]
    ft = shift_w(appendix_original(*APP))
    Nt = shift_w(inflection_numerator(appendix_original(*APP)))
    assert (1, 2, 3) in [tr.v for tr in tropisms(ft, Nt)]
    with pytest.raises(ValueError):
        tropisms(LaurentPolynomial.var("z"), LaurentPolynomial.var("w"))
