from itertools import product

import numpy as np
import pytest

from g2fk import groups as G
from g2fk.automorphisms import (Automorphism, BInduced, b0_elements, ca_lemma_instances, center_criterion_scan,
                                commutator_gram, diag_aut, diagonal, frattini_action_image, generating_pair_count,
                                inn_r_structure, inner, scalar_action_report, similitude_check, symplectic_checks)
from g2fk.poly_model import LElement


def _all_pass(results):
    bad = [r for r in results if r.status != "pass"]
    assert not bad, bad


def test_inner_is_automorphism(poly5):
    a = inner(poly5, poly5.generators[2])
    res = G.hom_check(a.images, poly5, poly5)
    assert res.bijective and np.array_equal(res.mapping, a.perm)


def test_identity_d(aut5):
    aut = aut5.b.aut(LElement.identity(5))
    assert aut.is_identity()


def test_b_factors_agree_with_direct_action(aut5):
    b = aut5.b
    for d in b0_elements(5)[::37]:
        assert np.array_equal(b.aut(d).perm, b.direct_perm(d))


def test_composition_order(aut5):
    # c_(d1 d2) = c_d1 then c_d2
    b = aut5.b
    d1, d2 = LElement(2, ((3, 0), (1, 4)), 5), LElement(3, ((1, 0), (2, 2)), 5)
    assert np.array_equal(b.aut(d1 * d2).perm, b.aut(d1).then(b.aut(d2)).perm)


def test_uncertified_rejected(aut5):
    t = aut5.table
    perm = np.arange(t.n)
    perm[[1, 2]] = perm[[2, 1]]
    a = Automorphism(t, perm)
    a.certify()
    assert not a.certified


def test_diag_aut_on_center(aut5):
    p = 5
    x6 = aut5.syl.gen(5)
    for t, lam in product(range(1, p), repeat=2):
        aut = diag_aut(aut5, t, lam)
        assert aut.certified
        assert int(aut(x6)) == int(aut5.table.power(np.array(x6), t * t * lam**3 % p))


def test_center_criterion(aut5):
    assert center_criterion_scan(aut5).status == "pass"


def test_scalar_action(aut5):
    assert scalar_action_report(aut5, 2, 3) == (2, 3)
    assert scalar_action_report(aut5, 1, 1) == (1, 1)


def test_gram(aut5):
    g = commutator_gram(aut5.syl)
    assert g.alternating and g.nondegenerate
    assert g.matrix[2, 3] == 0  # <x4, x5>


def test_similitude(aut5):
    d = LElement(2, ((3, 0), (4, 2)), 5)
    observed, expected = similitude_check(aut5, d)
    assert observed == expected == 2**2 * 6**3 % 5


def test_symplectic_suite(aut5):
    _all_pass(symplectic_checks(aut5, samples=40))


def test_pair_count_p5(aut5):
    pc = generating_pair_count(aut5, sample=500)
    assert pc.count == 7_500_000 == pc.expected
    assert pc.agreement == 500


def test_pair_count_formula():
    for p in (5, 7):
        assert (p**5 - p**3) * (p**5 - p**4) == p**7 * (p * p - 1) * (p - 1)


def test_inn_r(aut5):
    _all_pass(inn_r_structure(aut5))


def test_ca_lemma(aut5):
    _all_pass(ca_lemma_instances(aut5))


def test_frattini_action(aut5):
    _all_pass(frattini_action_image(aut5))


def test_b_induced_requires_poly(chev5):
    with pytest.raises(ValueError):
        BInduced(chev5)


def test_diagonal_rejects_zero(aut5):
    with pytest.raises(ValueError):
        diag_aut(aut5, 0, 1)
    assert diagonal(2, 3, 5).A == ((3, 0), (0, 1))
