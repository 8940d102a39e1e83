"""The p = 3 group in the matrix model and its two special maximal subgroups."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import groups as G
from .checks import CheckResult, check, skip
from .groups import GroupTable, Subgroup
from .sylow import SPANS

Q1_GENS = SPANS["Q"]  # beta, alpha+beta, alpha+2beta, alpha+3beta, 2alpha+3beta
Q2_GENS = SPANS["R"]  # alpha, alpha+beta, alpha+2beta, alpha+3beta, 2alpha+3beta


@dataclass
class P3Groups:
    table: GroupTable
    S: Subgroup
    Q1: Subgroup
    Q2: Subgroup


def build_p3(table: GroupTable | None = None) -> P3Groups:
    if table is None:
        from .tables import build_table

        table = build_table(3, "chevalley")
    if table.p != 3 or table.tag != "chevalley":
        raise ValueError("the p = 3 suite runs on the matrix model over F_3")
    gens = table.generators
    q1 = G.closure(table, [gens[i] for i in Q1_GENS], name="Q1")
    q2 = G.closure(table, [gens[i] for i in Q2_GENS], name="Q2")
    return P3Groups(table, table.whole(), q1, q2)


@dataclass
class TorusAut:
    """x_r(lam) -> x_r(chi_r(s, u) lam) on root words."""

    s: int
    u: int
    perm: np.ndarray
    certified: bool

    @classmethod
    def make(cls, table: GroupTable, s: int, u: int) -> TorusAut:
        p = table.p
        if s % p == 0 or u % p == 0:
            raise ValueError("torus parameters must be nonzero")
        perm = table.ids_of(table.model.torus_coords(table.coords, s % p, u % p))
        images = [int(perm[g]) for g in table.generators]
        res = G.hom_check(images, table, table)
        ok = res.bijective and bool((res.mapping == perm).all())
        return cls(s % p, u % p, perm, ok)

    def order(self) -> int:
        cur = self.perm.copy()
        k = 1
        while not (cur == np.arange(len(cur))).all():
            cur = self.perm[cur]
            k += 1
        return k

    def fixed(self, group: Subgroup) -> np.ndarray:
        el = group.elements
        return el[self.perm[el] == el]


def torus_auts(table: GroupTable) -> list[TorusAut]:
    p = table.p
    return [TorusAut.make(table, s, u) for s in range(1, p) for u in range(1, p) if (s, u) != (1, 1)]


def decomposition_witness(q: Subgroup):
    """First (A, E) with Q = A x E, A central elementary abelian of order 9, E extraspecial of order 27."""
    table = q.table
    zq = G.center(q)
    dq = G.commutator_subgroup(q)
    zel = [int(g) for g in zq.elements if g != table.identity]
    complements = []
    seen = set()
    for a, b in combinations(zel, 2):
        sub = G.closure(table, [a, b])
        if sub.order != 9 or sub.key in seen:
            continue
        seen.add(sub.key)
        if G.intersection(sub, dq).order == 1:
            complements.append(sub)
    el = [int(g) for g in q.elements]
    for a_sub in complements:
        for i, x in enumerate(el):
            for y in el[i + 1:]:
                if int(table.comm(x, y)) == table.identity:
                    continue
                e = G.closure(table, [x, y])
                if e.order != 27 or G.intersection(e, a_sub).order != 1:
                    continue
                if not (G.is_extraspecial(e) and G.exponent(e) == 3):
                    continue
                if G.join(a_sub, e).order == q.order:
                    return a_sub, e, (x, y)
    return None


def _decomposition_check(name: str, q: Subgroup) -> CheckResult:
    found = decomposition_witness(q)
    if found is None:
        return check(f"p3.a.{name}.decomposition", False, "3^2 x 3^(1+2)", "no decomposition", "exhaustive search")
    a_sub, e, (x, y) = found
    actual = f"A = <{', '.join(map(str, a_sub.gens))}> central, E = <{x}, {y}> extraspecial of exponent 3"
    return CheckResult(f"p3.a.{name}.decomposition", "pass", "3^2 x 3^(1+2)", actual, f"A gens {list(a_sub.gens)}, E gens {[x, y]}")


def _a_checks(name: str, q: Subgroup) -> list[CheckResult]:
    out = [
        check(f"p3.a.{name}.order", q.order == 243, 243, q.order),
        check(f"p3.a.{name}.exponent", G.exponent(q) == 3, 3, G.exponent(q)),
        check(f"p3.a.{name}.center", G.center(q).order == 27, 27, G.center(q).order),
        check(f"p3.a.{name}.derived", G.commutator_subgroup(q).order == 3, 3, G.commutator_subgroup(q).order),
    ]
    out.append(_decomposition_check(name, q))
    return out


def magma_fact_suite(groups: P3Groups) -> list:
    """Task list of the p = 3 facts about S, Q1 and Q2."""
    table, S, q1, q2 = groups.table, groups.S, groups.Q1, groups.Q2
    named = (("Q1", q1), ("Q2", q2))

    def basics():
        yield check("p3.order", S.order == 729, 729, S.order)
        yield check("p3.distinct", q1 != q2, "Q1 != Q2", q1 != q2)
        meet = G.intersection(q1, q2)
        yield check("p3.meet", meet.order == 81 and G.is_abelian(meet), "abelian of order 81",
                    f"order {meet.order}, abelian {G.is_abelian(meet)}")
        zs = G.center(S)
        yield check("p3.center.order", zs.order == 9, 9, zs.order)
        normals = G.bounded_normal_subgroups(S, 27)
        missed = [n for n in normals if G.intersection(n, zs).order == 1]
        yield check("p3.center.meets_normals", not missed,
                    "every nontrivial normal subgroup of order <= 27 meets Z(S)",
                    f"{len(normals)} normal subgroups", missed[0].gens if missed else None)

    def part_a():
        for name, q in named:
            yield from _a_checks(name, q)

    def part_bc():
        orders = G.element_orders(table)
        small = orders <= 3
        union = q1.mask | q2.mask
        bad = np.flatnonzero(small != union)
        yield check("p3.b.order_three", not bad.size, "{g : g^3 = 1} = Q1 u Q2",
                    f"{int(small.sum())} elements of order dividing 3, |Q1 u Q2| = {int(union.sum())}",
                    None if not bad.size else f"element {int(bad[0])}")
        outside = orders[~union]
        census = {int(k): int(v) for k, v in zip(*np.unique(outside, return_counts=True))}
        yield check("p3.c.order_nine", set(census) == {9}, "all elements outside Q1 u Q2 have order 9", census)

    def part_d():
        zs = G.center(S)
        bad = []
        maxima = G.maximal_subgroups(S)
        for m in maxima:
            if m == q1 or m == q2:
                continue
            if not zs <= G.commutator_subgroup(m):
                bad.append(m)
        yield check("p3.d.maximal_derived", not bad, "M' >= Z(S) for every maximal M other than Q1, Q2",
                    f"{len(maxima)} maximal subgroups, {len(bad)} exceptions", bad[0].gens if bad else None)

    def part_ef():
        for name, q in named:
            phi = G.frattini(q)
            qss = G.derived(G.derived(q, S), S)
            yield check(f"p3.e.{name}", not qss <= phi, "[Q_i, S, S] not in Phi(Q_i)",
                        f"|[Q_i,S,S]| = {qss.order}, |Phi(Q_i)| = {phi.order}, contained {qss <= phi}")
            zs_comm = G.derived(G.center(q), S)
            yield check(f"p3.f.{name}", not zs_comm <= phi, "[Z(Q_i), S] not in Phi(Q_i)",
                        f"|[Z(Q_i),S]| = {zs_comm.order}, contained {zs_comm <= phi}")

    def part_h():
        auts = torus_auts(table)
        uncertified = [(t.s, t.u) for t in auts if not t.certified]
        yield check("p3.h.certified", not uncertified, f"{len(auts)} torus maps certify", len(auts) - len(uncertified),
                    uncertified[0] if uncertified else None)
        involutions = [t for t in auts if t.certified and t.order() == 2]
        sizes = {f"({t.s},{t.u})": [len(t.fixed(q)) for _, q in named] for t in involutions}
        ok = bool(involutions) and all(n in (3, 9) for v in sizes.values() for n in v)
        yield check("p3.h.centralizers", ok, "|C_Qi(t)| in {3, 9} for each torus involution t", sizes)

    def part_g():
        yield skip("p3.g.aut_order", "|Aut(S)| = 2^3 3^10", "full Aut(S) out of scope")

    return [basics, part_a, part_bc, part_d, part_ef, part_h, part_g]
