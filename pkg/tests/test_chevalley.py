from itertools import product

import numpy as np
import pytest

from g2fk.chevalley import (PRINTED_RELATIONS, ROOTS, TORUS_WEIGHTS, NotInU, RootWord, commutator_survey,
                            evaluate_words, generate_u, iso_check, lift_constants, normal_form, normal_forms,
                            relation_mismatch, root_matrix, survey_checks)

from . import oracle


def test_printed_entries():
    p, lam = 7, 3
    m = root_matrix("2alpha+3beta", lam, p)
    want = np.eye(8, dtype=np.int64)
    want[6, 0] = -lam % p
    want[7, 1] = lam
    assert np.array_equal(m, want)


@pytest.mark.parametrize("root", ROOTS)
def test_identity_and_additivity(root):
    p = 5
    assert np.array_equal(root_matrix(root, 0, p), np.eye(8, dtype=np.int64))
    for lam, mu in product(range(p), repeat=2):
        prod = oracle.mat_mul(root_matrix(root, lam, p).tolist(), root_matrix(root, mu, p).tolist(), p)
        assert prod == root_matrix(root, lam + mu, p).tolist()


@pytest.mark.parametrize("root", ROOTS)
def test_unipotent(root):
    p = 7
    n = (root_matrix(root, 1, p) - np.eye(8, dtype=np.int64)) % p
    acc = np.eye(8, dtype=np.int64)
    for _ in range(8):
        acc = acc @ n % p
    assert not acc.any()


@pytest.mark.parametrize("p", [5, 7])
def test_generator_order(p):
    for root in ROOTS:
        m = root_matrix(root, 1, p).tolist()
        cur = oracle.mat_identity()
        for _ in range(p):
            cur = oracle.mat_mul(cur, m, p)
        assert cur == oracle.mat_identity()


def test_generate_u_p3():
    words = generate_u(3)
    assert len(words) == 729
    assert len({tuple(w) for w in words}) == 729


def test_normal_form_examples():
    p = 3
    assert normal_form(np.eye(8, dtype=np.int64), p).params == (0,) * 6
    assert normal_form(root_matrix("alpha", 2, p), p).params == (2, 0, 0, 0, 0, 0)
    m = np.array(oracle.mat_mul(root_matrix("beta", 1, p).tolist(), root_matrix("alpha", 1, p).tolist(), p))
    assert np.array_equal(normal_form(m, p).evaluate(), m)


def test_normal_form_round_trip_p3():
    p = 3
    words = np.array(list(product(range(p), repeat=6)))
    mats = evaluate_words(words, p)
    assert np.array_equal(normal_forms(mats, p), words)


def test_root_word_evaluate_matches_oracle():
    p = 5
    w = (1, 2, 3, 4, 0, 2)
    cur = oracle.mat_identity()
    for root, a in zip(ROOTS, w):
        cur = oracle.mat_mul(cur, root_matrix(root, a, p).tolist(), p)
    assert RootWord(w, p).evaluate().tolist() == cur


def test_not_in_u():
    m = np.eye(8, dtype=np.int64)
    m[0, 7] = 1
    with pytest.raises(NotInU):
        normal_form(m, 5)


def _survey_value(entry, root, lam, mu, p):
    return sum(c * lam**i * mu**j for (i, j), c in entry.coefficients.get(root, {}).items()) % p


@pytest.mark.parametrize("p", [3, 5, 7])
def test_big_relation_against_oracle(p):
    # [x_beta(lam), x_alpha(mu)] computed with list matrices vs the survey fit
    survey = commutator_survey(p)
    entry = survey[("beta", "alpha")]
    for lam, mu in product(range(p), repeat=2):
        comm = oracle.mat_commutator(root_matrix("beta", lam, p).tolist(), root_matrix("alpha", mu, p).tolist(), p)
        word = normal_form(np.array(comm), p).params
        assert word == tuple(_survey_value(entry, r, lam, mu, p) for r in ROOTS)


def test_big_relation_coordinates():
    # normal-form coordinates (fixed root order), not the printed factor order
    survey = commutator_survey(7)
    c = survey[("beta", "alpha")].coefficients
    assert c == {"alpha+beta": {(1, 1): 6}, "alpha+2beta": {(1, 2): 1},
                 "alpha+3beta": {(1, 3): 6}, "2alpha+3beta": {(2, 3): 6}}


@pytest.mark.parametrize("p", [3, 5])
def test_big_relation_printed_order_oracle(p):
    # x_(2a+3b)(2 mu^3 lam^2) x_(a+3b)(-mu^3 lam) x_(a+2b)(mu^2 lam) x_(a+b)(-mu lam)
    for lam, mu in product(range(p), repeat=2):
        comm = oracle.mat_commutator(root_matrix("beta", lam, p).tolist(), root_matrix("alpha", mu, p).tolist(), p)
        word = oracle.mat_identity()
        for root, val in (("2alpha+3beta", 2 * mu**3 * lam**2), ("alpha+3beta", -mu**3 * lam),
                          ("alpha+2beta", mu**2 * lam), ("alpha+beta", -mu * lam)):
            word = oracle.mat_mul(word, root_matrix(root, val % p, p).tolist(), p)
        assert comm == word


def test_center_root_commutes():
    survey = commutator_survey(5)
    for s in ROOTS[:-1]:
        assert survey[("2alpha+3beta", s)].trivial
        assert survey[(s, "2alpha+3beta")].trivial


def test_suspect_constant_from_oracle():
    # direct list-matrix commutators decide the constants
    for p in (5, 7):
        comm = oracle.mat_commutator(root_matrix("alpha+3beta", 1, p).tolist(), root_matrix("beta", 1, p).tolist(), p)
        assert normal_form(np.array(comm), p).params == (0, 0, 0, 0, 0, p - 1)
        comm = oracle.mat_commutator(root_matrix("alpha+2beta", 1, p).tolist(),
                                     root_matrix("alpha+beta", 1, p).tolist(), p)
        assert normal_form(np.array(comm), p).params == (0, 0, 0, 0, 0, 3)


def test_lifted_constants_prime_independent():
    lifted = lift_constants({5: commutator_survey(5), 7: commutator_survey(7)})
    assert lifted[("alpha+3beta", "beta")] == {"2alpha+3beta": {(1, 1): -1}}
    assert lifted[("alpha+2beta", "alpha+beta")] == {"2alpha+3beta": {(1, 1): 3}}
    assert lifted[("beta", "alpha")]["2alpha+3beta"] == {(2, 3): -1}
    assert lifted[("alpha+beta", "alpha")]["alpha+2beta"] == {(1, 1): -2}


def test_relation_mismatch_locates_disagreement():
    rels = {(r.r, r.s): r for r in PRINTED_RELATIONS}
    assert relation_mismatch(rels[("beta", "alpha")], 5) is None
    assert relation_mismatch(rels[("alpha+3beta", "beta")], 5) == (1, 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_survey_checks(p):
    res = {r.id: r for r in survey_checks(p)}
    assert res["chev.relation.beta.alpha"].status == "pass"
    assert res["chev.relation.alpha+beta.alpha"].status == "pass"
    assert res["chev.relation.alpha+2beta.alpha"].status == "pass"
    assert res["chev.relation.alpha+3beta.beta"].status == "finding"
    assert res["chev.relation.alpha+2beta.alpha+beta"].status == "finding"
    assert res["chev.trivial_pairs"].status == "pass"
    assert res["chev.constants_prime_independent"].status == "pass"
    assert all(r.witness for r in res.values() if r.status == "finding")


def test_iso_check_p5(poly5, chev5):
    res = iso_check(poly5, chev5)
    assert all(r.status == "pass" for r in res), [r for r in res if r.status != "pass"]
    hom = {r.id: r for r in res}
    assert hom["iso.u_to_s.hom"].actual == f"{6 * 5**6} checked"
    assert hom["iso.u_to_s.image"].actual == str(5**6)


def test_iso_check_rejects_p3(chev3):
    with pytest.raises(ValueError):
        iso_check(chev3, chev3)


def test_torus_weights_follow_big_relation():
    # the monomial lam^i mu^j on root t in [x_beta(lam), x_alpha(mu)] forces weight (j, i)
    survey = commutator_survey(5)
    for root, monos in survey[("beta", "alpha")].coefficients.items():
        (i, j), = monos
        assert TORUS_WEIGHTS[root] == (j, i)
