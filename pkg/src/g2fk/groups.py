"""Exact algorithms on fully enumerated finite groups.

Elements are dense integer ids.  A :class:`GroupTable` multiplies id arrays by
delegating to a coordinate model (or to a materialized Cayley table when the
group is small); subgroups are boolean masks over the carrier.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from threading import Lock
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .fastmul import chain_mul_ids

CAYLEY_LIMIT = 1024
CHUNK = 1 << 17


class GroupTable:
    """A finite group whose carrier is indexed by the rows of ``coords``.

    ``model`` supplies ``multiply``, ``inverse`` and ``words`` on coordinate
    arrays of shape (N, 6), plus ``identity`` and ``generator_coords``.
    """

    def __init__(self, model, coords: np.ndarray):
        self.model = model
        self.p = model.p
        coords = np.asarray(coords, dtype=np.int64)
        if coords.ndim != 2 or coords.shape[1] != 6:
            raise ValueError("coordinates must have shape (N, 6)")
        if coords.min(initial=0) < 0 or coords.max(initial=0) >= self.p:
            raise ValueError("coordinates out of range")
        self.coords = coords
        self.n = len(coords)
        self._radix = self.p ** np.arange(6, dtype=np.int64)
        codes = coords @ self._radix
        self._lookup = np.full(self.p**6, -1, dtype=np.int64)
        self._lookup[codes] = np.arange(self.n)
        if len(np.unique(codes)) != self.n:
            raise ValueError("duplicate elements in carrier")
        self.identity = int(self.ids_of(model.identity[None])[0])
        self.generators = tuple(int(g) for g in self.ids_of(model.generator_coords))
        self._cayley = None
        self._fast = None
        self._inverse = self.ids_of(model.inverse(coords))
        if self.n <= CAYLEY_LIMIT:
            self._cayley = self._compose_cayley()
        else:
            kernel = getattr(model, "id_kernel", None)
            if kernel is not None:
                self._fast = kernel(self.coords, self._lookup)
            elif getattr(model, "regular_mul", False):
                self._fast = self._chain_mul
            if self._fast is not None:
                self._audit(self._fast)
        self._lock = Lock()
        self._classes = None

    @property
    def tag(self) -> str:
        return self.model.tag

    def ids_of(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        ids = self._lookup[coords @ self._radix]
        if (ids < 0).any():
            raise KeyError("coordinates outside the carrier")
        return ids

    def id_of(self, coords: Sequence[int]) -> int:
        return int(self.ids_of(np.asarray(coords)[None])[0])

    @cached_property
    def words(self) -> np.ndarray:
        return self.model.words(self.coords)

    def _model_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.empty(len(a), dtype=np.int64)
        for lo in range(0, len(a), CHUNK):
            hi = lo + CHUNK
            prod = self.model.multiply(self.coords[a[lo:hi]], self.coords[b[lo:hi]])
            out[lo:hi] = self.ids_of(prod)
        return out

    def _right_generator_perms(self) -> list[np.ndarray]:
        ids = np.arange(self.n)
        shortcut = getattr(self.model, "right_generator_products", None)
        if shortcut is None or not np.array_equal(self.model.generator_coords, np.eye(6, dtype=np.int64)):
            return [self._model_mul(ids, np.full(self.n, g)) for g in self.generators]
        out = [np.empty(self.n, dtype=np.int64) for _ in self.generators]
        for lo in range(0, self.n, CHUNK):
            for dst, prod in zip(out, shortcut(self.coords[lo : lo + CHUNK])):
                dst[lo : lo + CHUNK] = self.ids_of(prod)
        return out

    @cached_property
    def _right(self) -> np.ndarray:
        return np.stack(self._right_generator_perms())

    def _chain_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # a*b = a x1^b1 ... x6^b6, one right-multiplication permutation at a time
        return chain_mul_ids(a, b, self.words, self._right)

    def _audit(self, mul) -> None:
        ids = np.arange(self.n)
        if not np.array_equal(mul(np.full(self.n, self.identity), ids), ids):
            raise RuntimeError("left identity law fails on the carrier")
        rng = np.random.default_rng(0)
        a, b = rng.integers(0, self.n, (2, 2000))
        if not np.array_equal(mul(a, b), self._model_mul(a, b)):
            raise RuntimeError("fast products disagree with the model")

    def _compose_cayley(self) -> np.ndarray:
        ids = np.arange(self.n)
        a, b = np.meshgrid(ids, ids, indexing="ij")
        table = self._chain_mul(a.ravel(), b.ravel()).reshape(self.n, self.n)
        self._audit(lambda x, y: table[x, y])
        return table

    def mul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        shape = a.shape
        a, b = a.ravel(), b.ravel()
        if self._cayley is not None:
            return self._cayley[a, b].reshape(shape)
        if self._fast is not None:
            return self._fast(a, b).reshape(shape)
        return self._model_mul(a, b).reshape(shape)

    def inv(self, a) -> np.ndarray:
        return self._inverse[np.asarray(a, dtype=np.int64)]

    def power(self, a, k: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if k < 0:
            a, k = self.inv(a), -k
        result = np.full(a.shape, self.identity, dtype=np.int64)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def conj(self, a, g) -> np.ndarray:
        """a^g = g^-1 a g."""
        return self.mul(self.mul(self.inv(g), a), g)

    def comm(self, a, b) -> np.ndarray:
        """[a, b] = a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def powers_of(self, g: int, count: int) -> np.ndarray:
        """[g^0, g^1, ..., g^(count-1)]."""
        out = np.empty(count, dtype=np.int64)
        out[0] = self.identity
        for k in range(1, count):
            out[k] = self.mul(out[k - 1], g)
        return out

    def root_element(self, i: int, lam: int = 1) -> int:
        """The id of the i-th generator (0-based) raised to lam."""
        return int(self.power(np.array(self.generators[i]), lam % self.p))

    def whole(self) -> Subgroup:
        return Subgroup(self, np.ones(self.n, dtype=bool), self.generators, "G")

    def conjugacy_classes(self) -> np.ndarray:
        """Class label per element (label = smallest id in the class); cached."""
        with self._lock:
            if self._classes is None:
                ids = np.arange(self.n)
                rows, cols = [], []
                for g in self.generators:
                    rows.append(ids)
                    cols.append(self.conj(ids, g))
                r, c = np.concatenate(rows), np.concatenate(cols)
                graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(self.n, self.n))
                _, labels = connected_components(graph, directed=True, connection="weak")
                first = np.full(labels.max() + 1, self.n, dtype=np.int64)
                np.minimum.at(first, labels, ids)
                self._classes = first[labels]
            return self._classes

    def __repr__(self) -> str:
        return f"GroupTable({self.tag}, p={self.p}, n={self.n})"


class Subgroup:
    """A subgroup given by its membership mask and a generating set."""

    def __init__(self, table: GroupTable, mask: np.ndarray, gens: Iterable[int], name: str = ""):
        self.table = table
        self.mask = mask
        self.mask.flags.writeable = False
        self.gens = tuple(int(g) for g in gens)
        self.name = name

    @cached_property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @cached_property
    def order(self) -> int:
        return int(self.mask.sum())

    @cached_property
    def key(self) -> str:
        return hashlib.sha1(np.packbits(self.mask).tobytes()).hexdigest()

    def named(self, name: str) -> Subgroup:
        return Subgroup(self.table, self.mask, self.gens, name)

    def contains(self, ids) -> np.ndarray:
        return self.mask[np.asarray(ids, dtype=np.int64)]

    def __contains__(self, g: int) -> bool:
        return bool(self.mask[int(g)])

    def __le__(self, other: Subgroup) -> bool:
        return not (self.mask & ~other.mask).any()

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.order < other.order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.table is other.table and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash(self.key)

    def describe(self) -> str:
        label = self.name or "subgroup"
        return f"{label} (order {self.order}, gens {list(self.gens)})"

    def __repr__(self) -> str:
        return f"Subgroup({self.describe()})"


@dataclass
class SeriesReport:
    kind: str
    terms: list[Subgroup]

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]

    @property
    def nilpotency_class(self) -> int:
        return len(self.terms) - 1

    def is_maximal_class(self, group_order: int, p: int) -> bool:
        n = round(np.log(group_order) / np.log(p))
        return self.nilpotency_class == n - 1


# ---------------------------------------------------------------------------
# generation


def closure(table: GroupTable, gens: Iterable[int], *, limit: int | None = None, name: str = "") -> Subgroup | None:
    """Breadth-first closure of ``gens``; returns None once the order passes ``limit``."""
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    gens = gens[gens != table.identity]
    mask = np.zeros(table.n, dtype=bool)
    mask[table.identity] = True
    count = 1
    frontier = np.array([table.identity], dtype=np.int64)
    while frontier.size and gens.size:
        cand = table.mul(frontier[:, None], gens[None, :]).ravel()
        cand = np.unique(cand[~mask[cand]])
        mask[cand] = True
        count += cand.size
        if limit is not None and count > limit:
            return None
        frontier = cand
    return Subgroup(table, mask, gens.tolist(), name)


def closure_orders(table: GroupTable, gen_sets: np.ndarray, *, batch: int = 256) -> np.ndarray:
    """Orders of <gens> for each row of ``gen_sets`` (shape (B, k)), by batched BFS."""
    gen_sets = np.atleast_2d(np.asarray(gen_sets, dtype=np.int64))
    out = np.empty(len(gen_sets), dtype=np.int64)
    k = gen_sets.shape[1]
    for lo in range(0, len(gen_sets), batch):
        gs = gen_sets[lo : lo + batch]
        b = len(gs)
        seen = np.zeros((b, table.n), dtype=bool)
        seen[:, table.identity] = True
        row = np.arange(b)
        elem = np.full(b, table.identity, dtype=np.int64)
        while row.size:
            rows = np.repeat(row, k)
            cand = table.mul(np.repeat(elem, k), gs[rows, np.tile(np.arange(k), len(row))])
            flat = np.unique(rows * table.n + cand)
            r, c = np.divmod(flat, table.n)
            fresh = ~seen[r, c]
            r, c = r[fresh], c[fresh]
            seen[r, c] = True
            row, elem = r, c
        out[lo : lo + batch] = seen.sum(axis=1)
    return out


def generated(table: GroupTable, seeds, *, limit: int | None = None, name: str = "") -> Subgroup | None:
    """Subgroup generated by a set (id array or mask), using a greedy generating set."""
    seeds = np.asarray(seeds)
    if seeds.dtype == bool:
        seeds = np.flatnonzero(seeds)
    seeds = np.unique(seeds.astype(np.int64))
    gens: list[int] = []
    current = closure(table, [], name=name)
    while True:
        outside = seeds[~current.mask[seeds]]
        if outside.size == 0:
            return current.named(name)
        gens.append(int(outside[0]))
        current = closure(table, gens, limit=limit, name=name)
        if current is None:
            return None


def from_mask(table: GroupTable, mask: np.ndarray, name: str = "") -> Subgroup:
    """Wrap a mask known to be a subgroup, deriving generators; verifies closure."""
    sub = generated(table, mask, name=name)
    if not np.array_equal(sub.mask, mask):
        raise ValueError("mask is not closed under multiplication")
    return sub


def join(*subs: Subgroup, name: str = "") -> Subgroup:
    table = subs[0].table
    return closure(table, [g for s in subs for g in s.gens], name=name)


def intersection(a: Subgroup, b: Subgroup, name: str = "") -> Subgroup:
    return from_mask(a.table, a.mask & b.mask, name=name)


def normal_closure(ambient: Subgroup, seeds, *, limit: int | None = None, name: str = "") -> Subgroup | None:
    """Smallest subgroup containing ``seeds`` normalized by ``ambient``."""
    table = ambient.table
    sub = generated(table, seeds, limit=limit)
    while sub is not None:
        gens = np.asarray(sub.gens, dtype=np.int64)
        conj = table.conj(gens[:, None], np.asarray(ambient.gens)[None, :]).ravel()
        if sub.contains(conj).all():
            return sub.named(name)
        sub = generated(table, np.concatenate([gens, conj]), limit=limit)
    return None


# ---------------------------------------------------------------------------
# centralizers, commutators, series


def _target_ids(target) -> np.ndarray:
    if isinstance(target, Subgroup):
        return np.asarray(target.gens, dtype=np.int64)
    return np.atleast_1d(np.asarray(target, dtype=np.int64))


def centralizer(ambient: Subgroup, target, name: str = "") -> Subgroup:
    table = ambient.table
    xs = ambient.elements
    keep = np.ones(len(xs), dtype=bool)
    for t in _target_ids(target):
        keep &= table.mul(xs, t) == table.mul(t, xs)
    mask = np.zeros(table.n, dtype=bool)
    mask[xs[keep]] = True
    return from_mask(table, mask, name)


def normalizer(ambient: Subgroup, target: Subgroup, name: str = "") -> Subgroup:
    table = ambient.table
    xs = ambient.elements
    keep = np.ones(len(xs), dtype=bool)
    for t in target.gens:
        keep &= target.contains(table.conj(t, xs))
    mask = np.zeros(table.n, dtype=bool)
    mask[xs[keep]] = True
    return from_mask(table, mask, name)


def center(group: Subgroup, name: str = "") -> Subgroup:
    return centralizer(group, group, name)


def derived(a: Subgroup, b: Subgroup, name: str = "") -> Subgroup:
    """[A, B]: the normal closure in <A, B> of the commutators of generators."""
    table = a.table
    ga, gb = np.asarray(a.gens), np.asarray(b.gens)
    seeds = table.comm(ga[:, None], gb[None, :]).ravel() if ga.size and gb.size else np.array([table.identity])
    return normal_closure(join(a, b), seeds, name=name)


def commutator_subgroup(group: Subgroup, name: str = "") -> Subgroup:
    return derived(group, group, name)


def frattini(group: Subgroup, name: str = "") -> Subgroup:
    """[P, P] P^p for a p-group P."""
    table = group.table
    powers = table.power(group.elements, table.p)
    seeds = np.concatenate([np.asarray(commutator_subgroup(group).gens, dtype=np.int64), powers])
    return generated(table, seeds, name=name)


def relative_center(group: Subgroup, modulo: Subgroup, name: str = "") -> Subgroup:
    """Preimage of Z(G/N): elements x with [x, g] in N for every generator g."""
    table = group.table
    xs = group.elements
    keep = np.ones(len(xs), dtype=bool)
    for g in group.gens:
        keep &= modulo.contains(table.comm(xs, g))
    mask = np.zeros(table.n, dtype=bool)
    mask[xs[keep]] = True
    return from_mask(table, mask, name)


def upper_central_series(group: Subgroup) -> SeriesReport:
    table = group.table
    terms = [closure(table, [], name="Z0")]
    while terms[-1].order < group.order:
        nxt = relative_center(group, terms[-1], name=f"Z{len(terms)}")
        if nxt.order == terms[-1].order:
            raise ValueError("group is not nilpotent")
        terms.append(nxt)
    return SeriesReport("upper", terms)


def lower_central_series(group: Subgroup) -> SeriesReport:
    terms = [group]
    while terms[-1].order > 1:
        nxt = derived(terms[-1], group)
        if nxt.order == terms[-1].order:
            raise ValueError("group is not nilpotent")
        terms.append(nxt)
    # ascending order to line up with the upper series
    return SeriesReport("lower", terms[::-1])


def central_series(group: Subgroup, kind: str = "upper") -> SeriesReport:
    if kind == "upper":
        return upper_central_series(group)
    if kind == "lower":
        return lower_central_series(group)
    raise ValueError(f"unknown series kind {kind!r}")


# ---------------------------------------------------------------------------
# orders and predicates


def element_orders(table: GroupTable, ids=None) -> np.ndarray:
    ids = np.arange(table.n) if ids is None else np.asarray(ids, dtype=np.int64)
    orders = np.zeros(len(ids), dtype=np.int64)
    cur = ids.copy()
    k = 1
    while (orders == 0).any():
        hit = (cur == table.identity) & (orders == 0)
        orders[hit] = k
        open_ = orders == 0
        if not open_.any():
            break
        cur[open_] = table.mul(cur[open_], ids[open_])
        k += 1
        if k > table.n:
            raise RuntimeError("element order exceeds group order")
    return orders


def exponent(group: Subgroup) -> int:
    return int(np.lcm.reduce(element_orders(group.table, group.elements)))


def order_census(group: Subgroup) -> dict[int, int]:
    values, counts = np.unique(element_orders(group.table, group.elements), return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def is_abelian(group: Subgroup) -> bool:
    t = group.table
    g = np.asarray(group.gens)
    return bool((t.mul(g[:, None], g[None, :]) == t.mul(g[None, :], g[:, None])).all())


def is_elementary_abelian(group: Subgroup) -> bool:
    t = group.table
    return is_abelian(group) and bool((t.power(np.asarray(group.gens), t.p) == t.identity).all())


def _quotient_data(group: Subgroup, modulo: Subgroup | None):
    table = group.table
    trivial = closure(table, [])
    n = modulo or trivial
    z = relative_center(group, n)
    d = join(commutator_subgroup(group), n)
    f = join(frattini(group), n)
    return n, z, d, f


def is_special(group: Subgroup, modulo: Subgroup | None = None) -> bool:
    """Z = [P, P] = Phi(P) (in P/N when ``modulo`` is given)."""
    n, z, d, f = _quotient_data(group, modulo)
    return z == d == f and z.order > n.order


def is_extraspecial(group: Subgroup, modulo: Subgroup | None = None) -> bool:
    n, z, d, f = _quotient_data(group, modulo)
    return z == d == f and z.order == n.order * group.table.p


def quotient_exponent(group: Subgroup, modulo: Subgroup) -> int:
    """Exponent of P/N."""
    t = group.table
    xs = group.elements
    k, cur = 1, xs.copy()
    while not modulo.contains(cur).all():
        cur = t.mul(cur, xs)
        k += 1
    # P/N is a p-group, so the first k with all x^k in N is its exponent
    return k


# ---------------------------------------------------------------------------
# maximal and normal subgroups


def frattini_basis(group: Subgroup, phi: Subgroup | None = None) -> tuple[Subgroup, list[int]]:
    """Phi(G) and elements whose images form a basis of G/Phi(G)."""
    table = group.table
    phi = phi or frattini(group)
    basis: list[int] = []
    current = phi
    while current.order < group.order:
        x = int(group.elements[~current.mask[group.elements]][0])
        basis.append(x)
        current = closure(table, list(phi.gens) + basis)
    return phi, basis


def maximal_subgroups(group: Subgroup) -> list[Subgroup]:
    """Index-p subgroups: preimages of hyperplanes of G/Phi(G)."""
    table = group.table
    p = table.p
    phi, basis = frattini_basis(group)
    d = len(basis)
    out = []
    # hyperplanes = kernels of normalized functionals (first nonzero entry 1)
    for f in _normalized_vectors(d, p):
        kernel = _kernel_basis(f, p)
        gens = list(phi.gens)
        for vec in kernel:
            g = table.identity
            for b, e in zip(basis, vec):
                g = int(table.mul(g, table.power(np.array(b), int(e))))
            gens.append(g)
        out.append(closure(table, gens))
    return out


def _normalized_vectors(d: int, p: int):
    for lead in range(d):
        for tail in np.ndindex(*([p] * (d - lead - 1))):
            yield (0,) * lead + (1,) + tuple(int(t) for t in tail)


def _kernel_basis(f: tuple[int, ...], p: int) -> list[tuple[int, ...]]:
    d = len(f)
    lead = next(i for i, c in enumerate(f) if c)
    out = []
    for j in range(d):
        if j == lead:
            continue
        vec = [0] * d
        vec[j] = 1
        vec[lead] = (-f[j] * pow(f[lead], -1, p)) % p
        out.append(tuple(vec))
    return out


def bounded_normal_subgroups(group: Subgroup, max_order: int, *, nontrivial: bool = True) -> list[Subgroup]:
    """All normal subgroups of order <= max_order.

    Normal subgroups are unions of conjugacy classes; each one is a join of
    normal closures of single classes.  Class closures exceeding the bound are
    pruned, then joins are explored depth first with the same pruning.
    """
    table = group.table
    if group.order != table.n:
        raise ValueError("bounded_normal_subgroups expects the whole carrier")
    labels = table.conjugacy_classes()
    reps = np.unique(labels)
    atoms: dict[str, Subgroup] = {}
    for rep in reps:
        if rep == table.identity:
            continue
        cls = np.flatnonzero(labels == rep)
        if cls.size > max_order:
            continue
        sub = generated(table, cls, limit=max_order)
        if sub is not None:
            atoms.setdefault(sub.key, sub)
    trivial = closure(table, [])
    found = {trivial.key: trivial}
    stack = [trivial]
    atom_list = sorted(atoms.values(), key=lambda s: (s.order, s.key))
    while stack:
        cur = stack.pop()
        for atom in atom_list:
            if atom <= cur:
                continue
            nxt = closure(table, list(cur.gens) + list(atom.gens), limit=max_order)
            if nxt is None or nxt.key in found:
                continue
            found[nxt.key] = nxt
            stack.append(nxt)
    subs = sorted(found.values(), key=lambda s: (s.order, s.key))
    if nontrivial:
        subs = [s for s in subs if s.order > 1]
    return subs


# ---------------------------------------------------------------------------
# homomorphisms


def extend_map(images: Sequence[int], source: GroupTable, target: GroupTable) -> np.ndarray:
    """Extend generator images along normal-form words: x -> prod images[i]^w_i(x)."""
    if len(images) != len(source.generators):
        raise ValueError("one image per generator is required")
    words = source.words
    span = int(words.max()) + 1
    out = None
    for i, img in enumerate(images):
        pw = target.powers_of(int(img), span)[words[:, i]]
        out = pw if out is None else target.mul(out, pw)
    return out


@dataclass
class HomResult:
    passed: bool
    equations: int
    image_size: int
    witness: tuple[int, int] | None
    mapping: np.ndarray

    @property
    def bijective(self) -> bool:
        return self.passed and self.image_size == len(self.mapping)


def hom_check(images: Sequence[int], source: GroupTable, target: GroupTable) -> HomResult:
    """f is a homomorphism iff f(g x) = f(g) f(x) for every generator g and all x."""
    f = extend_map(images, source, target)
    everything = np.arange(source.n)
    witness = None
    count = 0
    for g in source.generators:
        lhs = f[source.mul(g, everything)]
        rhs = target.mul(f[g], f)
        count += source.n
        bad = np.flatnonzero(lhs != rhs)
        if bad.size and witness is None:
            witness = (int(g), int(bad[0]))
    return HomResult(witness is None, count, int(np.unique(f).size), witness, f)
