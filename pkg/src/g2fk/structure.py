"""Structure checks on S: central series, characteristic subgroups, the
essentiality exclusion filter, and the W and U families."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import groups as G
from .automorphisms import commutator_gram
from .checks import CheckResult, check
from .field import rank_mod
from .groups import GroupTable, Subgroup
from .sylow import SylowContext, quotient_labels


class FilterInapplicable(ValueError):
    pass


# ---------------------------------------------------------------------------
# central series and characteristic subgroups


def series_checks(syl: SylowContext) -> list[CheckResult]:
    p = syl.p
    upper = G.upper_central_series(syl.S)
    lower = G.lower_central_series(syl.S)
    want = [1, p, p**2, p**3, p**4, p**6]
    same = len(upper.terms) == len(lower.terms) and all(a == b for a, b in zip(upper.terms, lower.terms))
    named = [syl.trivial, syl.Z1, syl.Z2, syl.Z3, syl.Z4, syl.S]
    matches = len(upper.terms) == 6 and all(a == b for a, b in zip(upper.terms, named))
    return [
        check("series.upper_orders", upper.orders == want, want, upper.orders),
        check("series.upper_terms", matches, "Z_i = <x6, ..., x_(7-i)> for i <= 4", matches),
        check("series.upper_equals_lower", same, "termwise equal", lower.orders),
        check("series.class", upper.nilpotency_class == 5, 5, upper.nilpotency_class),
        check("series.maximal_class", upper.is_maximal_class(syl.S.order, p), True,
              upper.is_maximal_class(syl.S.order, p)),
    ]


def q_checks(syl: SylowContext) -> list[CheckResult]:
    p = syl.p
    q = syl.Q
    return [
        check("q.order", q.order == p**5, p**5, q.order),
        check("q.extraspecial", G.is_extraspecial(q), True, G.is_extraspecial(q)),
        check("q.exponent", G.exponent(q) == p, p, G.exponent(q)),
        check("q.center_is_Z", G.center(q) == syl.Z1, "Z(Q) = Z", f"|Z(Q)| = {G.center(q).order}"),
    ]


def frattini_jordan_ranks(syl: SylowContext) -> list[int]:
    """Ranks of (M - I)^k, k = 1..4, for the action of x1 on Q/Z."""
    t = syl.table
    p = syl.p
    basis = [syl.gen(i) for i in range(1, 5)]
    labels, _ = quotient_labels(syl.Q, syl.Z1, basis)
    images = t.conj(np.asarray(basis), syl.gen(0))
    # row i = coordinates of x_(i+2)^x1
    m = np.array([[(int(labels[y]) // p**k) % p for k in range(4)] for y in images], dtype=np.int64)
    n = (m - np.eye(4, dtype=np.int64)) % p
    ranks, power = [], np.eye(4, dtype=np.int64)
    for _ in range(4):
        power = (power @ n) % p
        ranks.append(rank_mod(power, p))
    return ranks


def verify_charz(syl: SylowContext, extra_auts=()) -> list[CheckResult]:
    p = syl.p
    S, Z, Z2, Z3, Z4, Q, R = syl.S, syl.Z1, syl.Z2, syl.Z3, syl.Z4, syl.Q, syl.R
    zs = G.center(S)
    z2 = G.relative_center(S, zs)
    cs_z2 = G.centralizer(S, Z2)
    cq_z2 = G.centralizer(Q, Z2)
    q_cap_r = G.intersection(Q, R)
    out = [
        check("charz.a.Z", zs == Z and Z.order == p, f"Z(S) = <x6> of order {p}", f"|Z(S)| = {zs.order}"),
        check("charz.a.Z2", z2 == Z2 and Z2.order == p**2, f"Z2(S) = <x6, x5> of order {p**2}", f"|Z2(S)| = {z2.order}"),
        check("charz.b.R", cs_z2 == R, "C_S(Z2) = R", f"|C_S(Z2)| = {cs_z2.order}"),
        check("charz.c.Z3", G.is_elementary_abelian(Z3) and Z3.order == p**3, f"elementary abelian of order {p**3}",
              f"order {Z3.order}, elementary abelian {G.is_elementary_abelian(Z3)}"),
        check("charz.c.Z4", cq_z2 == Z4 and q_cap_r == Z4 and syl.phi == Z4, "Z4 = C_Q(Z2) = Q n R = Phi(S)",
              f"orders {cq_z2.order}, {q_cap_r.order}, {syl.phi.order}"),
        check("charz.c.Z4_nonabelian", not G.is_abelian(Z4), "non-abelian", f"abelian {G.is_abelian(Z4)}"),
    ]
    maximal_keys = {m.key for m in syl.maximals}
    out.append(check("charz.d.maximal", Q.key in maximal_keys and R.key in maximal_keys,
                     "Q and R are maximal", f"|Q| = {Q.order}, |R| = {R.order}"))
    moved = []
    extra_auts = list(extra_auts)
    t = syl.table
    rejected = []
    for label, perm in extra_auts:
        res = G.hom_check([int(perm[g]) for g in t.generators], t, t)
        if not (res.bijective and np.array_equal(res.mapping, perm)):
            rejected.append(label)
    out.append(check("charz.d.certified", not rejected, f"{len(extra_auts)} supplied maps are automorphisms",
                     f"{len(extra_auts) - len(rejected)} certified", rejected[0] if rejected else None))
    for label, perm in extra_auts:
        for name in ("Q", "R"):
            sub = getattr(syl, name)
            if not sub.contains(perm[np.asarray(sub.gens)]).all():
                moved.append(f"{label} moves {name}")
    out.append(CheckResult("charz.d.invariant_partial", "pass" if not moved else "fail",
                           "Q and R invariant under the available automorphisms",
                           f"{len(extra_auts)} automorphisms" if not moved else moved[0],
                           moved[0] if moved else None, note="partial check: only computable automorphisms"))
    normals = G.bounded_normal_subgroups(S, p**4)
    named = {Z.key, Z2.key, Z3.key, Z4.key}
    out.append(check("charz.e.normal", {n.key for n in normals} == named and len(normals) == 4,
                     "exactly Z1..Z4", [n.order for n in normals]))
    ranks = frattini_jordan_ranks(syl)
    out.append(check("charz.f.jordan", ranks == [3, 2, 1, 0], [3, 2, 1, 0], ranks))
    return out


def verify_z4char(syl: SylowContext) -> list[CheckResult]:
    Q, R, Z2, Z3, Z4 = syl.Q, syl.R, syl.Z2, syl.Z3, syl.Z4
    t = syl.table
    out = []
    phi_bad, comm_bad, unique_bad = None, None, None
    others = 0
    for i, x in enumerate(syl.maximals):
        if x == Q:
            continue
        if G.frattini(x) != Z3 and phi_bad is None:
            phi_bad = f"maximal #{i}: |Phi(X)| = {G.frattini(x).order}"
        if G.derived(Z3, x) != Z2 and comm_bad is None:
            comm_bad = f"maximal #{i}: |[Z3, X]| = {G.derived(Z3, x).order}"
        if x == R:
            continue
        others += 1
        z2 = np.asarray(Z2.gens)
        centralizing = [y for y in G.maximal_subgroups(x)
                        if (t.mul(np.asarray(y.gens)[:, None], z2[None]) == t.mul(z2[None], np.asarray(y.gens)[:, None])).all()]
        if (len(centralizing) != 1 or centralizing[0] != Z4) and unique_bad is None:
            unique_bad = f"maximal #{i}: {len(centralizing)} order-p^4 subgroups centralize Z2"
    out.append(check("z4char.phi", phi_bad is None, "Phi(X) = Z3 for maximal X != Q", "all" if phi_bad is None else phi_bad, phi_bad))
    out.append(check("z4char.commutator", comm_bad is None, "[Z3, X] = Z2 for maximal X != Q", "all" if comm_bad is None else comm_bad, comm_bad))
    out.append(check("z4char.unique", unique_bad is None, "Z4 is the only order-p^4 subgroup of X centralizing Z2",
                     f"{others} maximals checked" if unique_bad is None else unique_bad, unique_bad))
    return out


# ---------------------------------------------------------------------------
# exclusion filter


def commutator_in(table: GroupTable, gs: np.ndarray, gens, target: Subgroup) -> np.ndarray:
    """For each g in gs: every [g, e] (e in gens) lies in target."""
    ok = np.ones(len(gs), dtype=bool)
    for e in gens:
        ok &= target.contains(table.comm(gs, e))
    return ok


def exclusion_filter(S: Subgroup, E: Subgroup, F: Subgroup) -> int | None:
    """First g in N_S(E) - E (id order) with [g, E] <= F Phi(E) and [g, F] <= Phi(E).

    The two conditions are tested on generators of E and F, which is exact
    because F Phi(E) and Phi(E) are normal in E.
    """
    table = S.table
    n = G.normalizer(S, E)
    if n == E:
        raise FilterInapplicable("filter inapplicable (E self-normalizing)")
    phi = G.frattini(E)
    f_phi = G.join(F, phi)
    for sub in (f_phi, phi):
        if G.normalizer(E, sub) != E:
            raise FilterInapplicable("F Phi(E) must be normal in E")
    cand = n.elements[~E.mask[n.elements]]
    ok = commutator_in(table, cand, E.gens, f_phi) & commutator_in(table, cand, F.gens, phi)
    hits = cand[ok]
    return int(hits[0]) if hits.size else None


def characteristic_candidates(E: Subgroup) -> dict[str, Subgroup]:
    """Subgroups of E that every automorphism of E preserves.

    Z(E), Phi(E) and [E, E] always qualify.  So does Y when it is the only
    index-p subgroup of E centralizing [Phi(E), E]; this is how Z4 arises in
    maximal subgroups other than Q and R.
    """
    table = E.table
    phi = G.frattini(E)
    out = {"Z(E)": G.center(E), "Phi(E)": phi, "[E,E]": G.commutator_subgroup(E)}
    k = G.derived(phi, E)
    kg = np.asarray(k.gens, dtype=np.int64)
    central = []
    for y in G.maximal_subgroups(E):
        yg = np.asarray(y.gens, dtype=np.int64)
        if not kg.size or (table.mul(yg[:, None], kg[None]) == table.mul(kg[None], yg[:, None])).all():
            central.append(y)
    if len(central) == 1:
        out["C-unique"] = central[0]
    return out


@dataclass
class ScanEntry:
    subgroup: Subgroup
    witness: int | None
    via: str | None


def scan_maximals(syl: SylowContext) -> list[ScanEntry]:
    """Apply the filter to every maximal subgroup with each characteristic candidate F."""
    out = []
    for m in syl.maximals:
        hit = ScanEntry(m, None, None)
        for label, f in characteristic_candidates(m).items():
            g = exclusion_filter(syl.S, m, f)
            if g is not None:
                hit = ScanEntry(m, g, f"{label} (order {f.order})")
                break
        out.append(hit)
    return out


def _maximal_name(syl: SylowContext, m: Subgroup) -> str:
    return "Q" if m == syl.Q else "R" if m == syl.R else f"<{','.join(map(str, m.gens))}>"


def scan_checks(syl: SylowContext) -> list[CheckResult]:
    entries = scan_maximals(syl)
    survivors = [e.subgroup for e in entries if e.witness is None]
    ok = {s.key for s in survivors} == {syl.Q.key, syl.R.key} and len(survivors) == 2
    names = [_maximal_name(syl, s) for s in survivors]
    out = [CheckResult("maximals.survivors", "pass" if ok else "fail", "survivors {Q, R}",
                       f"{len(survivors)} of {len(entries)} survive: {names}",
                       None if ok else f"survivors {names}")]
    eliminated = [e for e in entries if e.witness is not None]
    for k, e in enumerate(eliminated):
        z4_used = e.via.startswith("C-unique") and characteristic_candidates(e.subgroup)["C-unique"] == syl.Z4
        out.append(CheckResult(f"maximals.eliminated.{k}", "pass" if z4_used else "fail",
                               "eliminated with F = Z4", f"g = {e.witness} via F = {e.via}",
                               f"g = {e.witness}" if not z4_used else None))
    z4_in_r = "C-unique" in characteristic_candidates(syl.R)
    out.append(check("maximals.z4_not_char_in_r", not z4_in_r,
                     "every index-p subgroup of R centralizes Z2, so Z4 is not singled out", z4_in_r))
    return out


# ---------------------------------------------------------------------------
# exponent facts


def exponent_checks(syl: SylowContext) -> list[CheckResult]:
    p = syl.p
    orders = G.element_orders(syl.table)
    exp = int(np.lcm.reduce(orders))
    outside = ~(syl.Q.mask | syl.R.mask)
    if p == 5:
        ok_set = np.array_equal(orders == 25, outside)
        return [
            check("exponent.value", exp == 25, 25, exp),
            check("exponent.order25_set", ok_set, "order-25 elements = S - (Q u R)",
                  f"{int((orders == 25).sum())} of order 25, {int(outside.sum())} outside Q u R"),
        ]
    return [check("exponent.value", exp == p, p, exp)]


# ---------------------------------------------------------------------------
# W family


@dataclass
class WFamily:
    members: np.ndarray  # (m, p^2) sorted element ids per member
    member_of: np.ndarray  # element id -> member index (-1 off the family)
    multiplicity: np.ndarray  # generating elements per member
    orbit: np.ndarray  # member index -> orbit label
    fiber: np.ndarray  # member index -> label of W Phi(S)

    @property
    def size(self) -> int:
        return len(self.members)

    @cached_property
    def orbit_sizes(self) -> list[int]:
        return sorted(np.bincount(np.unique(self.orbit, return_inverse=True)[1]).tolist())


def build_w_family(syl: SylowContext, delta: list[np.ndarray]) -> WFamily:
    """All W_x = <Z, x>, x outside Q u R, with orbits under the permutations in ``delta``."""
    t = syl.table
    p = syl.p
    outside = np.flatnonzero(~(syl.Q.mask | syl.R.mask))
    orders = G.element_orders(t, outside)
    if (orders != p).any():
        raise ValueError(f"W family needs exponent {p} outside Q u R; found order {int(orders.max())}")
    zs = t.powers_of(syl.gen(5), p)
    xs = np.stack([t.power(outside, k) for k in range(p)], axis=1)  # (N, p)
    elems = t.mul(xs[:, :, None], zs[None, None, :]).reshape(len(outside), p * p)
    elems.sort(axis=1)
    members, first, inverse, counts = np.unique(elems, axis=0, return_index=True, return_inverse=True, return_counts=True)
    inverse = inverse.ravel()
    member_of = np.full(t.n, -1, dtype=np.int64)
    member_of[outside] = inverse
    # orbits: join W with its image under every generator of Delta
    reps = outside[first]
    rows, cols = [], []
    for perm in delta:
        rows.append(np.arange(len(members)))
        cols.append(member_of[perm[reps]])
    r, c = np.concatenate(rows), np.concatenate(cols)
    if (c < 0).any():
        raise RuntimeError("a Delta generator moved a W member off the family")
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(len(members),) * 2)
    _, orbit = connected_components(graph, directed=True, connection="weak")
    labels, _ = syl.frattini_labels
    lines = [frozenset(int(v) for v in labels[m]) for m in members]
    fiber_ids = {line: k for k, line in enumerate(sorted(set(lines), key=sorted))}
    fiber = np.array([fiber_ids[line] for line in lines], dtype=np.int64)
    return WFamily(members, member_of, counts, orbit, fiber)


def same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    pairs = set(zip(a.tolist(), b.tolist()))
    return len(pairs) == len(set(a.tolist())) == len(set(b.tolist()))


def w_family_checks(syl: SylowContext, delta: list[np.ndarray]) -> list[CheckResult]:
    p = syl.p
    fam = build_w_family(syl, delta)
    t = syl.table
    expected = (p**6 - p**5 - (p**5 - p**4)) // (p * p - p)
    out = [
        check("w.count", fam.size == expected, expected, fam.size),
        check("w.generating_elements", bool((fam.multiplicity == p * p - p).all()), p * p - p,
              sorted(set(fam.multiplicity.tolist()))),
        check("w.orbits", fam.orbit_sizes == [p**3] * (p - 1), f"{p - 1} orbits of size {p**3}", fam.orbit_sizes),
        check("w.orbit_equals_fiber", same_partition(fam.orbit, fam.fiber), "orbit <-> W Phi(S)",
              f"{len(set(fam.fiber.tolist()))} fibers"),
    ]
    bad = None
    for k in sorted(set(fam.orbit.tolist())):
        idx = int(np.flatnonzero(fam.orbit == k)[0])
        w = G.from_mask(t, np.isin(np.arange(t.n), fam.members[idx]))
        if w.order != p * p and bad is None:
            bad = f"member {idx} has order {w.order}"
        n = G.normalizer(syl.S, w)
        wz2 = G.join(w, syl.Z2)
        if (n != wz2 or n.order != p**3) and bad is None:
            bad = f"member {idx}: |N_S(W)| = {n.order}"
    out.append(check("w.normalizer", bad is None, "N_S(W) = W Z2 of order p^3 on orbit representatives",
                     "all representatives" if bad is None else bad, bad))
    return out


# ---------------------------------------------------------------------------
# U family


@dataclass
class UFamily:
    xs: np.ndarray
    abelian: np.ndarray
    inside_r: np.ndarray
    x_in_r: np.ndarray


def build_u_family(syl: SylowContext) -> UFamily:
    """Flags for U_x = <Z2, x> over every x outside Q (generator-level tests)."""
    t = syl.table
    xs = np.flatnonzero(~syl.Q.mask)
    # Z2 is abelian and central-by-x6, so U_x is abelian iff x commutes with x5 and x6
    abelian = np.ones(len(xs), dtype=bool)
    for z in syl.Z2.gens:
        abelian &= t.comm(xs, z) == t.identity
    inside = np.ones(len(xs), dtype=bool)
    for z in syl.Z2.gens:
        inside &= syl.R.contains(z)
    inside &= syl.R.contains(xs)
    return UFamily(xs, abelian, inside, syl.R.contains(xs))


def u_family_checks(syl: SylowContext, sample: int = 300, seed: int = 0) -> list[CheckResult]:
    p = syl.p
    t = syl.table
    fam = build_u_family(syl)
    agree = (fam.abelian == fam.inside_r) & (fam.inside_r == fam.x_in_r)
    miss = np.flatnonzero(~agree)
    out = [check("u.equivalence", not miss.size, "abelian <=> U_x <= R <=> x in R for all x outside Q",
                 f"{len(fam.xs)} elements", None if not miss.size else f"x = {int(fam.xs[miss[0]])}")]
    rng = np.random.default_rng(seed)
    picks = rng.choice(fam.xs, size=min(sample, len(fam.xs)), replace=False)
    orders = G.element_orders(t, picks)
    bad = None
    outside_both = 0
    for x, o in zip(picks, orders):
        u = G.closure(t, list(syl.Z2.gens) + [int(x)])
        lit_abelian = G.is_abelian(u)
        lit_in_r = u <= syl.R
        if lit_abelian != lit_in_r or lit_in_r != (int(x) in syl.R):
            bad = bad or f"x = {int(x)}: abelian {lit_abelian}, <= R {lit_in_r}"
        if o == p and u.order != p**3:
            bad = bad or f"x = {int(x)} of order p: |U_x| = {u.order}"
        if not syl.Z2 <= u:
            bad = bad or f"x = {int(x)}: Z2 not contained"
        if int(x) not in syl.R:
            containing = sum(1 for m in syl.maximals if u <= m)
            if containing != 1:
                bad = bad or f"x = {int(x)}: in {containing} maximals"
            if o == p:
                outside_both += 1
                if not (G.is_extraspecial(u) and G.commutator_subgroup(u) == syl.Z1):
                    bad = bad or f"x = {int(x)}: U_x not extraspecial with derived group Z"
    out.append(check("u.literal_sample", bad is None, f"literal closures agree on {len(picks)} sampled x",
                     f"{len(picks)} sampled, {outside_both} extraspecial" if bad is None else bad, bad))
    return out


# ---------------------------------------------------------------------------
# subsets of F_7^x


@dataclass(frozen=True)
class SubsetOrbit:
    representative: tuple[int, ...]
    length: int
    members: tuple[tuple[int, ...], ...]


PRINTED_SUBSET_REPS = {
    "1_1": (1,), "2_1": (1, 2), "2_2": (1, 3), "2_3": (1, 6),
    "3_1": (1, 2, 3), "3_2": (1, 2, 5), "3_3": (1, 2, 6), "3_4": (1, 2, 4),
    "4_1": (1, 2, 3, 4), "4_2": (1, 2, 3, 5), "4_3": (1, 2, 5, 6),
    "5_1": (1, 2, 3, 4, 5), "6_1": (1, 2, 3, 4, 5, 6),
}


def subset_orbit_census(modulus: int = 7, relabel: int = 1) -> list[SubsetOrbit]:
    """Orbits of the multiplicative group on nonempty subsets of {1..modulus-1}.

    ``relabel`` applies a multiplier to every subset first (the orbit
    structure is invariant under it).
    """
    units = range(1, modulus)
    seen: set[tuple[int, ...]] = set()
    orbits = []
    for size in units:
        for subset in combinations(units, size):
            s = tuple(sorted((relabel * x) % modulus for x in subset))
            if s in seen:
                continue
            orbit = sorted({tuple(sorted((m * x) % modulus for x in s)) for m in units})
            seen.update(orbit)
            orbits.append(SubsetOrbit(orbit[0], len(orbit), tuple(orbit)))
    return sorted(orbits, key=lambda o: (len(o.representative), o.representative))


def labelled_census(modulus: int = 7) -> list[tuple[str, tuple[int, ...], tuple[int, ...], int]]:
    """(name, printed representative, least member, orbit length) rows, unnamed orbits labelled '-'."""
    orbits = subset_orbit_census(modulus)
    orbit_of = {m: k for k, o in enumerate(orbits) for m in o.members}
    names = {orbit_of[r]: (name, r) for name, r in PRINTED_SUBSET_REPS.items() if r in orbit_of}
    rows = []
    for k, o in enumerate(orbits):
        name, rep = names.get(k, ("-", ()))
        rows.append((name, rep, o.representative, o.length))
    return rows


def census_checks() -> list[CheckResult]:
    orbits = subset_orbit_census()
    lengths = sorted((o.length for o in orbits), reverse=True)
    want = [6] * 9 + [3, 3, 2, 1]
    orbit_of = {m: k for k, o in enumerate(orbits) for m in o.members}
    printed = sorted(orbit_of[r] for r in PRINTED_SUBSET_REPS.values())
    short = {name: orbits[orbit_of[r]].length for name, r in PRINTED_SUBSET_REPS.items() if orbits[orbit_of[r]].length < 6}
    return [
        check("census.orbits", len(orbits) == 13, 13, len(orbits)),
        check("census.lengths", lengths == want and sum(lengths) == 63, "{6^9, 3^2, 2, 1}, sum 63", lengths),
        check("census.printed_reps", printed == list(range(13)), "printed representatives hit each orbit once", printed),
        check("census.short_orbits", short == {"2_3": 3, "4_3": 3, "3_4": 2, "6_1": 1},
              "{2_3: 3, 4_3: 3, 3_4: 2, 6_1: 1}", short),
    ]


# ---------------------------------------------------------------------------
# maximal abelian subgroups of Q


def q_lagrangian_check(syl: SylowContext) -> list[CheckResult]:
    """Nondegenerate form on Q/Z, and |C_Q(x)| = p^4 for every non-central x in Q."""
    p = syl.p
    t = syl.table
    Q, Z = syl.Q, syl.Z1
    gram = commutator_gram(syl)
    basis = [syl.gen(i) for i in range(1, 5)]
    labels, _ = quotient_labels(Q, Z, basis)
    # one representative per nontrivial coset of Z (C_Q(xz) = C_Q(x))
    q_elems = Q.elements
    _, first = np.unique(labels[q_elems], return_index=True)
    reps = q_elems[first]
    reps = reps[~Z.contains(reps)]
    bad = None
    chunk = max(1, 2_000_000 // Q.order)
    for lo in range(0, len(reps), chunk):
        r = reps[lo : lo + chunk]
        commute = t.mul(r[:, None], q_elems[None, :]) == t.mul(q_elems[None, :], r[:, None])
        sizes = commute.sum(axis=1)
        wrong = np.flatnonzero(sizes != p**4)
        if wrong.size:
            bad = f"x = {int(r[wrong[0]])}: |C_Q(x)| = {int(sizes[wrong[0]])}"
            break
    z3_abelian = G.is_abelian(syl.Z3) and syl.Z3 <= Q and syl.Z3.order == p**3
    return [
        check("q.form_nondegenerate", gram.nondegenerate, "nondegenerate on Q/Z", f"rank {rank_mod(gram.matrix, p)}"),
        check("q.centralizers", bad is None, f"|C_Q(x)| = {p**4} for non-central x",
              f"{len(reps)} coset representatives" if bad is None else bad, bad),
        check("q.abelian_example", z3_abelian, "<Z, x5, x4> abelian of order p^3", z3_abelian),
    ]


def structure_suite(syl: SylowContext, *, extra_auts=(), delta=None, seed: int = 0):
    """Independent check tasks for the runner."""
    tasks = [
        lambda: series_checks(syl),
        lambda: q_checks(syl),
        lambda: verify_charz(syl, extra_auts),
        lambda: verify_z4char(syl),
        lambda: scan_checks(syl),
        lambda: exponent_checks(syl),
        lambda: u_family_checks(syl, seed=seed),
        census_checks,
        lambda: q_lagrangian_check(syl),
    ]
    if delta is not None:
        tasks.append(lambda: w_family_checks(syl, delta))
    return tasks
