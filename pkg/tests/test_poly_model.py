from itertools import product

import numpy as np
import pytest

from g2fk import ModelError
from g2fk.field import FieldScalar
from g2fk.poly_model import (BElement, CubicVector, LElement, QElement, SElement, action_kernel, b_conjugate_element,
                             beta_form, beta_matrix, binomial_expansion, l_act_vector, q_act, q_multiply, s_generators,
                             s_multiply, x)

from . import oracle

X3, X2Y, XY2, Y3 = (CubicVector(tuple(int(i == k) for i in range(4)), 7) for k in range(4))


def V(c, p=7):
    return CubicVector(tuple(c), p)


def test_beta_examples():
    assert beta_form(X3, X2Y) == FieldScalar(0, 7)
    assert beta_form(X3, Y3) == FieldScalar(-1, 7)
    assert beta_form(Y3, X3) == FieldScalar(1, 7)


def test_beta_requires_p5():
    with pytest.raises(ValueError):
        beta_matrix(3)


@pytest.mark.parametrize("p", [5, 7])
def test_beta_matches_oracle_on_basis(p):
    g = beta_matrix(p)
    for k, l in product(range(4), repeat=2):
        ek = oracle.cubic([int(i == k) for i in range(4)])
        el = oracle.cubic([int(i == l) for i in range(4)])
        assert g[k, l] == oracle.beta(ek, el, p)


def test_beta_alternating_exhaustive_p5():
    p = 5
    vs = np.array(list(product(range(p), repeat=4)))
    vals = np.einsum("nk,kl,nl->n", vs, beta_matrix(p), vs) % p
    assert not vals.any()


def test_q_multiply_examples():
    p = 7
    e = QElement.identity(p)
    w = QElement(V((1, 2, 3, 4)), 5)
    assert q_multiply(e, w) == w
    a = x(5, 2, p).q
    b = x(5, 3, p).q
    assert q_multiply(a, b) == x(5, 5, p).q


def test_q_commutator_formula_p5(poly5):
    # on Q: [(v, y), (w, z)] = (0, 2 beta(v, w)); exhaustive over vector pairs
    p = 5
    vs = np.array(list(product(range(p), repeat=4)))
    n = len(vs)
    a = np.zeros((n, 6), dtype=np.int64)
    a[:, 1:5] = vs
    ids = poly5.ids_of(a)
    g = beta_matrix(p)
    for k in range(0, n, 25):
        b = np.repeat(ids[k], n)
        comm = poly5.coords[poly5.comm(ids, b)]
        assert not comm[:, :5].any()
        assert np.array_equal(comm[:, 5], (2 * (vs @ g @ vs[k])) % p)


def test_q_inverse():
    q = QElement(V((1, 2, 3, 4)), 5)
    assert q * q.inverse() == QElement.identity(7)


def test_l_act_examples():
    p = 7
    v = V((1, 2, 3, 4))
    assert l_act_vector(v, LElement.identity(p)) == v
    mu = 3
    got = l_act_vector(Y3, LElement(1, ((1, 0), (mu, 1)), p))
    assert got.coeffs == binomial_expansion(mu, p)
    assert got.coeffs == (mu**3 % p, 3 * mu**2 % p, 3 * mu % p, 1)
    t, lam = 2, 5
    assert l_act_vector(X3, LElement(t, ((lam, 0), (0, 1)), p)).coeffs == (t * lam**3 % p, 0, 0, 0)


@pytest.mark.parametrize("p", [5, 7])
def test_l_act_matches_oracle(p):
    rng = np.random.default_rng(p)
    for _ in range(40):
        while True:
            A = tuple(tuple(int(x) for x in row) for row in rng.integers(0, p, (2, 2)))
            if (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % p:
                break
        t = int(rng.integers(1, p))
        c = tuple(int(x) for x in rng.integers(0, p, 4))
        got = l_act_vector(V(c, p), LElement(t, A, p))
        assert got.coeffs == oracle.coeffs(oracle.l_act(oracle.cubic(c), t, A, p), p)


def test_q_act_examples():
    p = 7
    q = QElement(V((1, 2, 3, 4)), 5)
    assert q_act(q, LElement.identity(p)) == q
    lam, t, l0 = 3, 2, 4
    got = q_act(x(6, lam, p).q, LElement(t, ((l0, 0), (0, 1)), p))
    assert got == QElement(V((0, 0, 0, 0)), -2 * lam * t**2 * l0**3)


def test_q_act_is_homomorphism_p5():
    p = 5
    rng = np.random.default_rng(1)
    basis = [QElement(V(tuple(int(i == k) for i in range(4)), p), 0) for k in range(4)]
    basis.append(QElement(V((0, 0, 0, 0), p), 1))
    for _ in range(50):
        while True:
            A = tuple(tuple(int(x) for x in row) for row in rng.integers(0, p, (2, 2)))
            if (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % p:
                break
        g = LElement(int(rng.integers(1, p)), A, p)
        for a, b in product(basis, repeat=2):
            assert q_act(a * b, g) == q_act(a, g) * q_act(b, g)


@pytest.mark.parametrize("p", [5, 7])
def test_action_kernel(p):
    ker = action_kernel(p)
    assert len(ker) == p - 1
    want = {LElement(pow(mu, -3, p), ((mu, 0), (0, mu)), p) for mu in range(1, p)}
    assert set(ker) == want
    assert LElement.identity(p) in ker


def test_kernel_fixes_p7():
    p = 7
    q = QElement(V((1, 0, 0, 0)), 1)
    for mu in range(1, p):
        assert q_act(q, LElement(pow(mu, -3, p), ((mu, 0), (0, mu)), p)) == q


def test_degenerate_l_rejected():
    with pytest.raises(ValueError):
        LElement(1, ((1, 2), (2, 4)), 7)
    with pytest.raises(ValueError):
        LElement(0, ((1, 0), (0, 1)), 7)
    with pytest.raises(ValueError):
        BElement(1, ((1, 1), (0, 1)), 7)


def test_s_multiply_examples():
    p = 7
    s = SElement.from_coords((1, 2, 3, 4, 5, 6), p)
    assert s_multiply(SElement.identity(p), s) == s
    assert x(1, 3, p) * x(1, 5, p) == x(1, 1, p)


@pytest.mark.parametrize("p", [5, 7])
def test_s_multiply_matches_oracle(p):
    rng = np.random.default_rng(p)
    for _ in range(200):
        c1, c2 = (tuple(int(v) for v in rng.integers(0, p, 6)) for _ in range(2))
        got = s_multiply(SElement.from_coords(c1, p), SElement.from_coords(c2, p)).coords()
        want = oracle.s_coords(oracle.s_mul(oracle.s_from_coords(c1), oracle.s_from_coords(c2), p), p)
        assert got == want


def test_generators():
    p = 7
    gens = s_generators(p)
    assert gens[1](0) == SElement.identity(p)
    assert gens[3](1).v.coeffs == (0, 3, 0, 0)
    assert x(5, 1, p).v.coeffs == (p - 1, 0, 0, 0)
    assert x(3, 1, p).v.coeffs == (0, 0, p - 3, 0)
    assert x(2, 1, p).v.coeffs == (0, 0, 0, 1)
    assert x(6, 1, p).z == p - 2
    assert x(1, 4, p).a == 4
    with pytest.raises(ValueError):
        x(2, 1, 3)


def test_x5_x2_commutator_central(poly7):
    p = 7
    t = poly7
    for lam, mu in product(range(p), repeat=2):
        a = t.id_of(x(5, lam, p).coords())
        b = t.id_of(x(2, mu, p).coords())
        c = t.coords[int(t.comm(a, b))]
        assert not c[:5].any()


def test_b_conjugation_examples():
    p = 7
    s = SElement.from_coords((1, 2, 3, 4, 5, 6), p)
    assert b_conjugate_element(s, BElement.make(1, 1, 0, 1, p)) == s
    t, lam, c = 3, 2, 5
    d = BElement.make(t, lam, 0, 1, p)
    assert b_conjugate_element(x(6, c, p), d) == SElement(0, CubicVector.zero(p), -2 * c * t**2 * lam**3)


def test_b_conjugation_matches_table_action(poly5):
    p = 5
    d = BElement.make(2, 3, 4, 2, p)
    rows = poly5.coords[::97]
    fast = poly5.model.automorphism_coords(rows, d)
    for r, f in zip(rows, fast):
        assert b_conjugate_element(SElement.from_coords(tuple(r), p), d).coords() == tuple(f)


def test_b_conjugation_preserves_q(poly5, syl5):
    p = 5
    for d in (BElement.make(2, 3, 4, 2, p), BElement.make(4, 1, 1, 3, p)):
        image = poly5.ids_of(poly5.model.automorphism_coords(poly5.coords[syl5.Q.elements], d))
        assert syl5.Q.contains(image).all()


def test_words_evaluate_back(poly5):
    # words give x1^b1 ... x6^b6; rebuild a sample with scalar arithmetic
    p = 5
    words = poly5.words
    for i in range(0, poly5.n, 211):
        g = SElement.identity(p)
        for k in range(6):
            g = g * x(k + 1, int(words[i, k]), p)
        assert g.coords() == tuple(poly5.coords[i])


def test_p3_rejected():
    with pytest.raises((ValueError, ModelError)):
        s_generators(3)
