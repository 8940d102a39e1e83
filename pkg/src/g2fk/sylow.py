"""Named subgroups of S, shared by the structure and automorphism suites.

Generator i (0-based) of either model is x_{i+1}(1); the Chevalley root order
(alpha, beta, alpha+beta, alpha+2beta, alpha+3beta, 2alpha+3beta) lines up
with x1..x6, so the same index lists describe both models.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product

import numpy as np

from . import groups as G
from .groups import GroupTable, Subgroup

# generator indexes (0-based) of the named subgroups
SPANS = {
    "Z1": (5,),
    "Z2": (4, 5),
    "Z3": (3, 4, 5),
    "Z4": (2, 3, 4, 5),
    "Q": (1, 2, 3, 4, 5),
    "R": (0, 2, 3, 4, 5),
}


class SylowContext:
    """Lazily computed subgroups of the ambient group S of a table."""

    def __init__(self, table: GroupTable):
        self.table = table
        self.p = table.p

    def gen(self, i: int) -> int:
        return self.table.generators[i]

    def span(self, name: str) -> Subgroup:
        return G.closure(self.table, [self.gen(i) for i in SPANS[name]], name=name)

    @cached_property
    def S(self) -> Subgroup:
        return self.table.whole()

    @cached_property
    def Z1(self) -> Subgroup:
        return self.span("Z1")

    @cached_property
    def Z2(self) -> Subgroup:
        return self.span("Z2")

    @cached_property
    def Z3(self) -> Subgroup:
        return self.span("Z3")

    @cached_property
    def Z4(self) -> Subgroup:
        return self.span("Z4")

    @cached_property
    def Q(self) -> Subgroup:
        return self.span("Q")

    @cached_property
    def R(self) -> Subgroup:
        return self.span("R")

    @cached_property
    def phi(self) -> Subgroup:
        return G.frattini(self.S, name="Phi(S)")

    @cached_property
    def trivial(self) -> Subgroup:
        return G.closure(self.table, [], name="1")

    @cached_property
    def maximals(self) -> list[Subgroup]:
        return G.maximal_subgroups(self.S)

    @cached_property
    def z_powers(self) -> dict[int, int]:
        """Central element id -> k with element = x6^k."""
        pw = self.table.powers_of(self.gen(5), self.p)
        return {int(e): k for k, e in enumerate(pw)}

    def z_exponent(self, ids) -> np.ndarray:
        """x6-exponents of central elements; raises if any element lies outside Z."""
        lut = self.z_powers
        ids = np.atleast_1d(np.asarray(ids, dtype=np.int64))
        missing = [int(i) for i in ids.ravel() if int(i) not in lut]
        if missing:
            raise ValueError(f"element {missing[0]} is not a power of x6")
        return np.array([lut[int(i)] for i in ids.ravel()], dtype=np.int64).reshape(ids.shape)

    @cached_property
    def frattini_labels(self) -> tuple[np.ndarray, list[int]]:
        """Coordinates of S/Phi(S) in the basis (x1 Phi, x2 Phi), as one label i + p*j per element."""
        return quotient_labels(self.S, self.phi, [self.gen(0), self.gen(1)])


def quotient_labels(group: Subgroup, normal: Subgroup, basis: list[int]) -> tuple[np.ndarray, list[int]]:
    """Label every element of ``group`` by its coset b1^i b2^j ... N.

    ``basis`` must map onto a basis of the elementary abelian quotient
    group/normal.  Labels are mixed-radix integers (first basis element least
    significant); elements outside ``group`` get -1.  Raises if the cosets do
    not partition the group.
    """
    table = group.table
    p = table.p
    labels = np.full(table.n, -1, dtype=np.int64)
    members = normal.elements
    for digits in product(range(p), repeat=len(basis)):
        rep = table.identity
        for b, e in zip(basis, digits):
            rep = int(table.mul(rep, table.power(np.array(b), e)))
        coset = table.mul(rep, members)
        if (labels[coset] != -1).any():
            raise ValueError("basis does not give distinct cosets")
        labels[coset] = sum(e * p**k for k, e in enumerate(digits))
    if (labels[group.elements] == -1).any() or (labels[~group.mask] != -1).any():
        raise ValueError("cosets do not cover the group")
    return labels, list(basis)
