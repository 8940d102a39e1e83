"""The cubic-form model of S for p >= 5.

V is the space of binary cubic forms with basis (X^3, X^2Y, XY^2, Y^3); a
vector is stored as its coefficient 4-tuple in that order, so basis index k
is the monomial X^(3-k) Y^k.  Q = V x F with the twisted law
(v, y)(w, z) = (v + w, y + z + beta(v, w)), and S = S0 Q where S0 is the
group of lower unitriangular 2x2 matrices acting on V by substitution.

Elements of S are kept in the normal form x1(a) * (v, z), i.e. the coordinate
6-vector (a, c30, c21, c12, c03, z).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .field import FieldScalar, binom3, check_prime, inv_mod

# basis index k <-> X^(3-k) Y^k
MONOMIALS = ("X^3", "X^2Y", "XY^2", "Y^3")


# ---------------------------------------------------------------------------
# scalar API


@dataclass(frozen=True)
class CubicVector:
    coeffs: tuple[int, int, int, int]
    p: int

    def __post_init__(self) -> None:
        if len(self.coeffs) != 4:
            raise ValueError("a cubic form has exactly four coefficients")
        object.__setattr__(self, "coeffs", tuple(int(c) % self.p for c in self.coeffs))

    @classmethod
    def zero(cls, p: int) -> CubicVector:
        return cls((0, 0, 0, 0), p)

    @classmethod
    def monomial(cls, a: int, p: int, scale: int = 1) -> CubicVector:
        """scale * X^a Y^(3-a)."""
        c = [0, 0, 0, 0]
        c[3 - a] = scale
        return cls(tuple(c), p)

    def __add__(self, other: CubicVector) -> CubicVector:
        return CubicVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.p)

    def __neg__(self) -> CubicVector:
        return CubicVector(tuple(-a for a in self.coeffs), self.p)

    def scale(self, s: int) -> CubicVector:
        return CubicVector(tuple(s * a for a in self.coeffs), self.p)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k]


@dataclass(frozen=True)
class QElement:
    v: CubicVector
    z: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", int(self.z) % self.v.p)

    @property
    def p(self) -> int:
        return self.v.p

    @classmethod
    def identity(cls, p: int) -> QElement:
        return cls(CubicVector.zero(p), 0)

    def __mul__(self, other: QElement) -> QElement:
        return q_multiply(self, other)

    def inverse(self) -> QElement:
        return QElement(-self.v, -self.z)


@dataclass(frozen=True)
class LElement:
    """(t, A) in F^x x GL2(F); A is given row-major as ((alpha, beta), (gamma, delta))."""

    t: int
    A: tuple[tuple[int, int], tuple[int, int]]
    p: int

    def __post_init__(self) -> None:
        p = self.p
        t = int(self.t) % p
        A = tuple(tuple(int(x) % p for x in row) for row in self.A)
        if t == 0:
            raise ValueError("t must be nonzero")
        if (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % p == 0:
            raise ValueError("A must be invertible")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "A", A)

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.A
        return (a * d - b * c) % self.p

    @classmethod
    def identity(cls, p: int) -> LElement:
        return cls(1, ((1, 0), (0, 1)), p)

    def __mul__(self, other: LElement) -> LElement:
        (a, b), (c, d) = self.A
        (e, f), (g, h) = other.A
        return LElement(
            self.t * other.t,
            ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)),
            self.p,
        )

    def inverse(self) -> LElement:
        (a, b), (c, d) = self.A
        di = inv_mod(self.det, self.p)
        return LElement(inv_mod(self.t, self.p), ((d * di, -b * di), (-c * di, a * di)), self.p)


@dataclass(frozen=True)
class BElement(LElement):
    """An element of B0: A lower triangular with nonzero diagonal."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.A[0][1] != 0:
            raise ValueError("B0 elements are lower triangular")

    @classmethod
    def make(cls, t: int, alpha: int, gamma: int, beta: int, p: int) -> BElement:
        return cls(t, ((alpha, 0), (gamma, beta)), p)


@dataclass(frozen=True)
class SElement:
    a: int
    v: CubicVector
    z: int

    def __post_init__(self) -> None:
        p = self.v.p
        object.__setattr__(self, "a", int(self.a) % p)
        object.__setattr__(self, "z", int(self.z) % p)

    @property
    def p(self) -> int:
        return self.v.p

    @property
    def q(self) -> QElement:
        return QElement(self.v, self.z)

    def coords(self) -> tuple[int, ...]:
        return (self.a, *self.v.coeffs, self.z)

    @classmethod
    def from_coords(cls, c, p: int) -> SElement:
        return cls(c[0], CubicVector(tuple(c[1:5]), p), c[5])

    @classmethod
    def identity(cls, p: int) -> SElement:
        return cls(0, CubicVector.zero(p), 0)

    def __mul__(self, other: SElement) -> SElement:
        return s_multiply(self, other)


def beta_matrix(p: int) -> np.ndarray:
    """Gram matrix of beta in the basis (X^3, X^2Y, XY^2, Y^3)."""
    check_prime(p, minimum=5)
    g = np.zeros((4, 4), dtype=np.int64)
    for k in range(4):
        a = 3 - k  # X-degree of the left monomial
        for l in range(4):
            d = l  # Y-degree of the right monomial
            if a == d:
                g[k, l] = ((-1) ** a * inv_mod(binom3(a, p).value, p)) % p
    return g


def beta_form(v: CubicVector, w: CubicVector) -> FieldScalar:
    p = v.p
    if w.p != p:
        raise ValueError("modulus mismatch")
    g = beta_matrix(p)
    return FieldScalar(int(np.asarray(v.coeffs) @ g @ np.asarray(w.coeffs)), p)


def q_multiply(q1: QElement, q2: QElement) -> QElement:
    if q1.p != q2.p:
        raise ValueError("modulus mismatch")
    return QElement(q1.v + q2.v, q1.z + q2.z + beta_form(q1.v, q2.v).value)


def _poly_mul(f: list[int], g: list[int], p: int) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return out


def l_action_matrix(t: int, A, p: int) -> np.ndarray:
    """4x4 matrix M with v . (t, A) = v @ M (row-vector convention).

    X^a Y^b maps to t (alpha X + beta Y)^a (gamma X + delta Y)^b.  Polynomials in
    one homogeneous pair are stored by Y-degree, matching the basis index.
    """
    (al, be), (ga, de) = A
    rows = []
    for k in range(4):
        a, b = 3 - k, k
        poly = [1]
        for _ in range(a):
            poly = _poly_mul(poly, [al, be], p)
        for _ in range(b):
            poly = _poly_mul(poly, [ga, de], p)
        rows.append([(t * c) % p for c in poly])
    return np.array(rows, dtype=np.int64)


def l_act_vector(v: CubicVector, g: LElement) -> CubicVector:
    m = l_action_matrix(g.t, g.A, g.p)
    return CubicVector(tuple(int(x) for x in (np.asarray(v.coeffs) @ m) % g.p), g.p)


def q_act(q: QElement, g: LElement) -> QElement:
    """(v, z)^(t, A) = (v.(t, A), t^2 det(A)^3 z)."""
    check_prime(g.p, minimum=5)
    return QElement(l_act_vector(q.v, g), g.t**2 * g.det**3 * q.z)


def action_kernel(p: int) -> list[LElement]:
    """Exhaustive kernel of the L-action on Q.

    An element acts trivially on Q iff it fixes every basis vector of V and
    scales the centre by 1, so only the 4x4 matrix and the centre scalar are
    inspected; every (t, A) in L is visited.
    """
    check_prime(p, minimum=5)
    eye = np.eye(4, dtype=np.int64)
    out = []
    for t in range(1, p):
        for al in range(p):
            for be in range(p):
                for ga in range(p):
                    for de in range(p):
                        det = (al * de - be * ga) % p
                        if det == 0:
                            continue
                        if (t * t * det**3) % p != 1:
                            continue
                        if np.array_equal(l_action_matrix(t, ((al, be), (ga, de)), p), eye):
                            out.append(LElement(t, ((al, be), (ga, de)), p))
    return out


def unipotent(a: int, p: int) -> LElement:
    """x1(a) = (1, [[1, 0], [a, 1]])."""
    return LElement(1, ((1, 0), (a, 1)), p)


def s_multiply(s1: SElement, s2: SElement) -> SElement:
    """(a, q)(a', q') = (a + a', q^x1(a') * q')."""
    p = s1.p
    check_prime(p, minimum=5)
    moved = q_act(s1.q, unipotent(s2.a, p))
    prod = q_multiply(moved, s2.q)
    return SElement(s1.a + s2.a, prod.v, prod.z)


def x(i: int, lam: int, p: int) -> SElement:
    """The root element x_i(lam) of S, i = 1..6."""
    check_prime(p, minimum=5)
    zero = CubicVector.zero(p)
    if i == 1:
        return SElement(lam, zero, 0)
    if i == 6:
        return SElement(0, zero, -2 * lam)
    # x5 = -lam X^3, x4 = 3 lam X^2Y, x3 = -3 lam XY^2, x2 = lam Y^3
    scale = {5: -1, 4: 3, 3: -3, 2: 1}[i]
    a = {5: 3, 4: 2, 3: 1, 2: 0}[i]
    return SElement(0, CubicVector.monomial(a, p, scale * lam), 0)


def s_generators(p: int) -> list:
    """Constructors lam -> x_i(lam) for i = 1..6."""
    check_prime(p, minimum=5)
    return [lambda lam, i=i: x(i, lam, p) for i in range(1, 7)]


def b_conjugate_element(s: SElement, d: LElement) -> SElement:
    """s^d for d in B0: the S0 part by matrix conjugation, the Q part by q_act."""
    p = s.p
    conj = d.inverse() * unipotent(s.a, p) * d
    (one, zero), (a_new, one2) = conj.A
    if (one, zero, one2) != (1, 0, 1) or conj.t != 1:
        raise ValueError("d does not normalize S0")
    qd = q_act(s.q, d)
    return SElement(a_new, qd.v, qd.z)


# ---------------------------------------------------------------------------
# vectorized model used by the group tables


class PolyModel:
    """Coordinate arithmetic for S on arrays of shape (N, 6)."""

    tag = "poly"
    tag_byte = 0

    def __init__(self, p: int):
        self.p = check_prime(p, minimum=5)
        self.beta = beta_matrix(p)
        self.shear = np.stack([l_action_matrix(1, ((1, 0), (a, 1)), p) for a in range(p)])

    @property
    def identity(self) -> np.ndarray:
        return np.zeros(6, dtype=np.int64)

    @cached_property
    def generator_coords(self) -> np.ndarray:
        return np.array([x(i, 1, self.p).coords() for i in range(1, 7)], dtype=np.int64)

    def generator_power_coords(self, i: int, lam: np.ndarray) -> np.ndarray:
        """Coordinates of x_(i+1)(lam) for an array of lam (i is 0-based)."""
        lam = np.asarray(lam, dtype=np.int64)
        out = np.zeros(lam.shape + (6,), dtype=np.int64)
        out[...] = (self.generator_coords[i] * lam[..., None]) % self.p
        return out

    def _q_mul(self, v1, z1, v2, z2):
        p = self.p
        cross = np.einsum("nk,kl,nl->n", v1, self.beta, v2)
        return (v1 + v2) % p, (z1 + z2 + cross) % p

    def id_kernel(self, coords: np.ndarray, lookup: np.ndarray):
        """Compiled id-level product over a carrier indexed by base-p codes."""
        from .fastmul import poly_mul_ids

        shear, beta, p = self.shear.astype(np.int64), self.beta.astype(np.int64), self.p
        return lambda a, b: poly_mul_ids(a, b, coords, lookup, shear, beta, p)

    def multiply(self, c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
        p = self.p
        a1, v1, z1 = c1[:, 0], c1[:, 1:5], c1[:, 5]
        a2, v2, z2 = c2[:, 0], c2[:, 1:5], c2[:, 5]
        moved = np.einsum("nk,nkl->nl", v1, self.shear[a2]) % p
        v, z = self._q_mul(moved, z1, v2, z2)
        out = np.empty_like(c1)
        out[:, 0] = (a1 + a2) % p
        out[:, 1:5] = v
        out[:, 5] = z
        return out

    def inverse(self, c: np.ndarray) -> np.ndarray:
        p = self.p
        a = (-c[:, 0]) % p
        v = np.einsum("nk,nkl->nl", (-c[:, 1:5]) % p, self.shear[a]) % p
        out = np.empty_like(c)
        out[:, 0] = a
        out[:, 1:5] = v
        out[:, 5] = (-c[:, 5]) % p
        return out

    def words(self, c: np.ndarray) -> np.ndarray:
        """Exponents (b1..b6) with element = x1(b1) x2(b2) ... x6(b6)."""
        p = self.p
        i3 = inv_mod(3, p)
        w = np.zeros_like(c)
        w[:, 0] = c[:, 0]
        w[:, 1] = c[:, 4]  # x2 carries Y^3
        w[:, 2] = (-c[:, 3] * i3) % p  # x3 carries -3 XY^2
        w[:, 3] = (c[:, 2] * i3) % p  # x4 carries 3 X^2Y
        w[:, 4] = (-c[:, 1]) % p  # x5 carries -X^3
        # the z-part of x2 x3 x4 x5 comes from the beta cross terms
        zero = np.zeros(len(c), dtype=np.int64)
        v, z = zero[:, None].repeat(4, axis=1), zero
        for i in range(1, 5):
            g = self.generator_power_coords(i, w[:, i])
            v, z = self._q_mul(v, z, g[:, 1:5], g[:, 5])
        w[:, 5] = ((c[:, 5] - z) * inv_mod(-2, p)) % p
        return w

    def automorphism_coords(self, c: np.ndarray, d: LElement) -> np.ndarray:
        """Apply conjugation by d in B0 to coordinate rows."""
        p = self.p
        al, de = d.A[0][0], d.A[1][1]
        if d.A[0][1] != 0:
            raise ValueError("conjugating element must lie in B0")
        # A^-1 [[1,0],[a,1]] A = [[1,0],[a*alpha/delta,1]]
        out = np.empty_like(c)
        out[:, 0] = (c[:, 0] * al * inv_mod(de, p)) % p
        out[:, 1:5] = (c[:, 1:5] @ l_action_matrix(d.t, d.A, p)) % p
        out[:, 5] = (c[:, 5] * d.t**2 * d.det**3) % p
        return out


def binomial_expansion(mu: int, p: int) -> tuple[int, ...]:
    """Coefficients of (mu X + Y)^3 in the basis order; an independent oracle."""
    return tuple((comb(3, k) * mu ** (3 - k)) % p for k in range(4))
