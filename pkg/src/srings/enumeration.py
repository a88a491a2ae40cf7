"""Exhaustive enumeration of S-rings over small abelian groups.

The search picks the class of the least unassigned element, adds every image
of that class under the power maps (they permute classes), and closes the
partial partition after each step.  A branch dies as soon as the closure
splits a chosen class.  In fused mode, candidate classes are reduced to orbit
representatives of the automorphisms of ``G`` that preserve the branch, and
leaves are deduplicated by a canonical form, so each S-ring is reported once
up to Cayley isomorphism.
"""

from __future__ import annotations

import threading
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from sympy.utilities.iterables import multiset_partitions

from . import config
from .errors import ResourceError, UsageError
from .groups import AbelianGroup, Decomposition, automorphism_group, join, power_maps
from .sring import SRing, a_subgroups, closure_labels, is_sring, is_wreath_decomposition

# ---------------------------------------------------------------- canonical form


def _rgs_rows(labels: np.ndarray) -> np.ndarray:
    """Relabel every row by order of first appearance."""
    rows, n = labels.shape
    width = int(labels.max()) + 1
    first = np.full((rows, width), n, dtype=np.int64)
    r = np.repeat(np.arange(rows), n)
    np.minimum.at(first, (r, labels.reshape(-1)), np.tile(np.arange(n), rows))
    rank = np.argsort(np.argsort(first, axis=1, kind="stable"), axis=1, kind="stable")
    return np.take_along_axis(rank, labels, axis=1)


def _lexmin_row(rows: np.ndarray) -> int:
    alive = np.arange(len(rows))
    for col in range(rows.shape[1]):
        vals = rows[alive, col]
        alive = alive[vals == vals.min()]
        if len(alive) == 1:
            break
    return int(alive[0])


class _AutTable:
    """All automorphisms of ``G`` as an array of permutations, with inverses."""

    def __init__(self, G: AbelianGroup):
        perms = list(automorphism_group(G).elements())
        self.perms = np.unique(np.array(perms, dtype=np.int64).reshape(len(perms), G.order), axis=0)
        self.inverse = np.argsort(self.perms, axis=1)

    def canonical(self, labels: np.ndarray) -> tuple[int, ...]:
        images = _rgs_rows(np.asarray(labels, dtype=np.int64)[self.inverse])
        return tuple(int(v) for v in images[_lexmin_row(images)])


_aut_cache: dict[AbelianGroup, _AutTable] = {}
_aut_lock = threading.Lock()


def _aut_table(G: AbelianGroup) -> _AutTable:
    with _aut_lock:
        table = _aut_cache.get(G)
        if table is None:
            table = _aut_cache[G] = _AutTable(G)
        return table


def canonical_key(A: SRing) -> tuple[int, ...]:
    """Lexicographically least restricted-growth labeling among the images of ``A`` under ``aut(G)``.

    Two S-rings over ``G`` are Cayley isomorphic through a group automorphism
    exactly when their keys agree.
    """
    return _aut_table(A.group).canonical(A.class_of)


def canonical_form(A: SRing) -> SRing:
    """The representative of ``A`` whose labeling is :func:`canonical_key`."""
    return SRing.from_labels(A.group, np.array(canonical_key(A), dtype=np.int64))


def sort_key(A: SRing) -> tuple:
    return (A.rank, A.classes)


# ---------------------------------------------------------------- search


@dataclass
class _Node:
    labels: np.ndarray  # class label per element, -1 when unassigned
    count: int  # number of labels in use
    coarse: np.ndarray  # closure of the partial partition
    stabilizer: np.ndarray | None  # rows of the automorphism table preserving the chosen classes


@dataclass
class SearchStats:
    nodes: int = 0
    candidates: int = 0
    leaves: int = 0
    extras: dict[str, Any] = field(default_factory=dict)


class _Search:
    def __init__(self, G: AbelianGroup, fuse: bool):
        self.G = G
        self.n = G.order
        self.fuse = fuse
        self.powers = np.unique(np.array(power_maps(G), dtype=np.int64).reshape(-1, self.n), axis=0)
        self.aut = _aut_table(G) if fuse else None
        self.seen: set[tuple[int, ...]] = set()
        self.lock = threading.Lock()
        self.stats = SearchStats()

    def root(self) -> _Node:
        labels = np.full(self.n, -1, dtype=np.int64)
        labels[0] = 0
        coarse = closure_labels(self.G, (np.arange(self.n) != 0).astype(np.int64))
        stab = np.arange(len(self.aut.perms)) if self.fuse else None
        return _Node(labels, 1, coarse, stab)

    # candidate classes through the least unassigned element

    def _candidates(self, node: _Node) -> list[np.ndarray]:
        labels = node.labels
        free = np.flatnonzero(labels < 0)
        m = int(free[0])
        pool = [int(y) for y in free[1:] if node.coarse[y] == node.coarse[m]]
        state = np.zeros(self.n, dtype=np.int8)  # 1 in, 0 out or undecided-out, 2 undecided
        state[pool] = 2
        state[m] = 1
        powers = self.powers
        out: list[np.ndarray] = []

        def consistent() -> bool:
            members = np.flatnonzero(state == 1)
            images = state[powers[:, members]]
            hit = (images == 1).any(axis=1)
            return not (images[hit] == 0).any()

        def rec(i: int) -> None:
            if i == len(pool):
                out.append(np.flatnonzero(state == 1))
                return
            y = pool[i]
            for choice in (1, 0):
                state[y] = choice
                if consistent():
                    rec(i + 1)
            state[y] = 2

        # undecided elements count as possible members until reached
        if consistent():
            rec(0)
        return out

    def _orbit_representatives(self, node: _Node, cands: list[np.ndarray], m: int) -> list[np.ndarray]:
        if not self.fuse or len(cands) < 2:
            return cands
        rows = node.stabilizer[self.aut.perms[node.stabilizer, m] == m]
        if len(rows) <= 1:
            return cands
        if self.n > 62:
            raise ResourceError("orbit reduction packs subsets into 64-bit words")
        mat = np.zeros((len(cands), self.n), dtype=np.int64)
        for i, c in enumerate(cands):
            mat[i, c] = 1
        weights = np.int64(1) << np.arange(self.n, dtype=np.int64)
        codes = mat @ weights
        best = codes.copy()
        for r in rows:
            best = np.minimum(best, mat[:, self.aut.inverse[r]] @ weights)
        return [c for c, a, b in zip(cands, codes, best) if a == b]

    def _extend(self, node: _Node, X: np.ndarray) -> _Node | None:
        labels = node.labels.copy()
        count = node.count
        for img in np.unique(np.sort(self.powers[:, X], axis=1), axis=0):
            labels[img] = count
            count += 1
        free = labels < 0
        q = np.where(free, count + node.coarse, labels)
        coarse = closure_labels(self.G, q)
        fixed = ~free
        pairs = np.unique(labels[fixed] * (self.n + 1) + coarse[fixed])
        if len(pairs) != count:
            return None
        stab = None
        if self.fuse:
            stab = self._stabilizer(node.stabilizer, labels, fixed)
        return _Node(labels, count, coarse, stab)

    def _stabilizer(self, rows: np.ndarray, labels: np.ndarray, fixed: np.ndarray) -> np.ndarray:
        perms = self.aut.perms[rows]
        images = labels[perms]
        idx = np.flatnonzero(fixed)
        rep = np.zeros(int(labels.max()) + 1, dtype=np.int64)
        rep[labels[idx[::-1]]] = idx[::-1]
        reps = rep[labels[idx]]
        ok = (images[:, idx] >= 0).all(axis=1) & (images[:, idx] == images[:, reps]).all(axis=1)
        return rows[ok]

    def children(self, node: _Node) -> list[_Node]:
        self.stats.nodes += 1
        m = int(np.flatnonzero(node.labels < 0)[0])
        cands = self._orbit_representatives(node, self._candidates(node), m)
        self.stats.candidates += len(cands)
        out = []
        for X in cands:
            child = self._extend(node, X)
            if child is not None:
                out.append(child)
        return out

    def leaf(self, node: _Node) -> SRing | None:
        self.stats.leaves += 1
        if not self.fuse:
            return SRing.from_labels(self.G, node.labels)
        key = self.aut.canonical(node.labels)
        with self.lock:
            if key in self.seen:
                return None
            self.seen.add(key)
        return SRing.from_labels(self.G, np.array(key, dtype=np.int64))

    def walk(self, node: _Node) -> Iterator[SRing]:
        if (node.labels >= 0).all():
            got = self.leaf(node)
            if got is not None:
                yield got
            return
        for child in self.children(node):
            yield from self.walk(child)


def _check_bound(G: AbelianGroup, bound: int | None) -> None:
    bound = config.ENUM_BOUND if bound is None else bound
    if G.order > bound:
        raise ResourceError(f"enumeration is limited to order {bound}, got {G.order}")


def iter_srings(
    G: AbelianGroup,
    fuse: bool = True,
    bound: int | None = None,
    threads: int = 1,
    stats: SearchStats | None = None,
) -> Iterator[SRing]:
    """Stream the S-rings over ``G`` as they are found.

    With ``fuse`` each Cayley isomorphism class is reported once, by its
    canonical representative; without it every labeled S-ring is reported.
    The emitted set does not depend on ``threads``; the order may.
    """
    _check_bound(G, bound)
    search = _Search(G, fuse)
    root = search.root()
    if G.order == 1:
        yield SRing(G, [(0,)])
        return
    try:
        if threads <= 1:
            yield from search.walk(root)
            return
        branches = search.children(root)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for found in pool.map(lambda b: list(search.walk(b)), branches):
                yield from found
    finally:
        if stats is not None:
            stats.nodes, stats.candidates, stats.leaves = (
                search.stats.nodes,
                search.stats.candidates,
                search.stats.leaves,
            )


def all_srings(G: AbelianGroup, fuse: bool = True, bound: int | None = None, threads: int = 1) -> list[SRing]:
    """Every S-ring over ``G`` (one per Cayley isomorphism class when ``fuse``), sorted by rank then classes."""
    return sorted(iter_srings(G, fuse=fuse, bound=bound, threads=threads), key=sort_key)


def count_srings(G: AbelianGroup, fuse: bool = True, bound: int | None = None) -> int:
    return sum(1 for _ in iter_srings(G, fuse=fuse, bound=bound))


def for_each_sring(G: AbelianGroup, callback: Callable[[SRing], None], fuse: bool = True) -> int:
    """Callback form of :func:`iter_srings`; returns the number of S-rings seen."""
    k = 0
    for A in iter_srings(G, fuse=fuse):
        callback(A)
        k += 1
    return k


# ---------------------------------------------------------------- oracle


def brute_force_srings(G: AbelianGroup) -> list[SRing]:
    """Filter every inverse-closed partition with ``{0}`` as a class through the axioms (order <= 8)."""
    if G.order > config.BRUTE_BOUND:
        raise ResourceError(f"brute force is limited to order {config.BRUTE_BOUND}, got {G.order}")
    if G.order == 1:
        return [SRing(G, [(0,)])]
    neg = G.neg
    out = []
    for parts in multiset_partitions(list(range(1, G.order))):
        blocks = [frozenset(p) for p in parts]
        if any(frozenset(int(neg[x]) for x in b) not in blocks for b in blocks):
            continue
        partition = [(0,)] + [tuple(sorted(b)) for b in blocks]
        if is_sring(G, partition):
            out.append(SRing(G, partition))
    return sorted(out, key=sort_key)


def fuse_up_to_automorphism(srings: list[SRing]) -> list[SRing]:
    """Canonical representatives of the Cayley isomorphism classes in ``srings``."""
    keys: dict[tuple[int, ...], SRing] = {}
    for A in srings:
        keys.setdefault(canonical_key(A), A)
    return sorted((canonical_form(A) for A in keys.values()), key=sort_key)


# ---------------------------------------------------------------- structural check suites


@dataclass
class Check:
    name: str
    passed: bool
    witness: dict[str, Any] | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, witness: dict[str, Any] | None = None) -> None:
        self.checks.append(Check(name, bool(passed), None if passed else witness))

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def _sumset(G: AbelianGroup, X, Y) -> frozenset[int]:
    X, Y = list(X), list(Y)
    if not X or not Y:
        return frozenset()
    return frozenset(int(v) for v in G.add_table[np.ix_(X, Y)].reshape(-1))


def prime_factor_split(A: SRing, decomposition: Decomposition) -> tuple[int, int]:
    """Validate ``G = H x P`` with ``P`` of prime order coprime to ``|H|``; returns ``(|H|, p)``."""
    if decomposition.group != A.group:
        raise UsageError("decomposition belongs to another group")
    h = decomposition.G1.order
    p = decomposition.G2.order
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise UsageError(f"second component has order {p}, which is not prime")
    if h % p == 0:
        raise UsageError(f"prime {p} divides the order {h} of the first component")
    return h, p


def prime_factor_decompositions(G: AbelianGroup) -> list[Decomposition]:
    """Splittings of the listed factors as ``H x Z_p`` with ``p`` prime and coprime to ``|H|``."""
    out = []
    for j, f in enumerate(G.factors):
        if f < 2 or any(f % d == 0 for d in range(2, int(f**0.5) + 1)):
            continue
        if (G.order // f) % f == 0 or G.rank < 2:
            continue
        out.append(Decomposition(G, tuple(i for i in range(G.rank) if i != j)))
    return out


def lemma_suite(A: SRing, decomposition: Decomposition) -> Report:
    """Structural checks for an S-ring over ``H x Z_p`` with ``p`` coprime to ``|H|``.

    * every class ``X`` has ``pr_H(X) minus (X & H)`` an A-set, and when ``X``
      meets both ``H`` and its complement, ``X`` is rebuilt from its two
      ``H``-parts and ``X`` together with that set is ``pr_H(X) + P``;
    * when the largest A-group inside ``H`` is proper, ``A`` is a wreath
      product of one of the two shapes below;
    * over ``E4 x Z_p`` with both factors A-groups and ``A`` not their tensor
      product, the classes with full regular projection onto ``H`` behave as
      described in :func:`_highest_class_checks`.
    """
    h, p = prime_factor_split(A, decomposition)
    G = A.group
    report = Report()
    H, P = decomposition.G1, decomposition.G2
    prH = decomposition.projection_array(1)
    Hset, Pset = H.member_set, P.member_set
    P_sharp = Pset - {0}

    for X in A.classes:
        Xs = frozenset(X)
        HX = Xs & Hset
        proj = frozenset(int(prH[x]) for x in X)
        HpX = proj - HX
        report.add("outside-part-is-a-set", A.is_a_set(HpX), {"class": list(X), "set": sorted(HpX)})
        if HX and Xs - Hset:
            rebuilt = _sumset(G, HX, Pset) | _sumset(G, HpX, P_sharp)
            report.add("class-from-H-parts", rebuilt == Xs, {"class": list(X), "rebuilt": sorted(rebuilt)})
            report.add(
                "class-plus-outside-part",
                (Xs | HpX) == _sumset(G, proj, Pset),
                {"class": list(X)},
            )

    groups = a_subgroups(A)
    inside = [K for K in groups if K.member_set <= Hset]
    H1 = max(inside, key=lambda K: K.order)
    if H1.order != h:
        first = is_wreath_decomposition(A, H1, H1) and _quotient_rank(A, H1) == 2
        second = None
        if not first:
            for L in groups:
                if Pset <= L.member_set and L.order < G.order:
                    U = join(H1, L)
                    if is_wreath_decomposition(A, U, L):
                        second = L
                        break
        report.add(
            "largest-inner-group-wreath",
            first or second is not None,
            {"largest_A_group_in_H": list(H1.members)},
        )

    if _is_e4(decomposition) and p > 2 and A.is_a_group(H) and A.is_a_group(P):
        _highest_class_checks(A, decomposition, report)
    return report


def _quotient_rank(A: SRing, L) -> int:
    G = A.group
    seen = set()
    for X in A.classes:
        seen.add(frozenset(_sumset(G, X, L.members)))
    return len(seen)


def _is_e4(decomposition: Decomposition) -> bool:
    fs = [decomposition.group.factors[j] for j in decomposition.first]
    return sorted(f for f in fs if f > 1) == [2, 2]


def _highest_class_checks(A: SRing, decomposition: Decomposition, report: Report) -> None:
    """For ``E4 x Z_p`` with both factors A-groups and ``A`` not their tensor product.

    Let ``R`` be the largest class of ``A_H`` (the regular orbit of its
    cyclic automorphism group) and call a class highest when it projects
    onto ``R`` in ``H`` and nontrivially in ``P``.  Then highest classes exist,
    project onto classes of ``A_P``, form one orbit under multiplication of
    the ``P``-coordinate by units, have size equal to their ``P``-projection
    with the fibres over ``R`` disjoint of equal size, and every other class
    is a product of its projections with one of them a singleton.
    """
    G = A.group
    H, P = decomposition.G1, decomposition.G2
    prH = decomposition.projection_array(1)
    prP = decomposition.projection_array(2)

    CH = A.classes_inside(H.members)
    CP = A.classes_inside(P.members)
    tensor_parts = {frozenset(_sumset(G, X, Y)) for X in CH for Y in CP}
    if tensor_parts == {frozenset(X) for X in A.classes}:
        return
    R = frozenset(max(CH, key=len))
    p = P.order
    p_classes = {frozenset(Y) for Y in CP}
    highest = []
    for X in A.classes:
        XH = frozenset(int(prH[x]) for x in X)
        XP = frozenset(int(prP[x]) for x in X)
        if XH == R and XP != {0}:
            highest.append(frozenset(X))
            report.add("highest-projects-to-class", XP in p_classes, {"class": list(X)})
            report.add("highest-size", len(X) == len(XP), {"class": list(X)})
            fibres = [frozenset(int(prP[x]) for x in X if prH[x] == a) for a in R]
            sizes = {len(f) for f in fibres}
            disjoint = sum(len(f) for f in fibres) == len(frozenset().union(*fibres))
            report.add("highest-fibres", disjoint and len(sizes) == 1, {"class": list(X)})
        else:
            product = _sumset(G, XH, XP)
            report.add(
                "other-is-product",
                product == frozenset(X) and (len(XH) == 1 or len(XP) == 1),
                {"class": list(X)},
            )
    report.add("highest-exists", bool(highest), {})
    if highest:
        orbit = set()
        for m in range(1, p):
            scaled = G.add_table[np.asarray(prH), G.multiples(m)[np.asarray(prP)]]
            orbit.add(frozenset(int(scaled[x]) for x in highest[0]))
        report.add(
            "highest-one-orbit",
            orbit == set(highest),
            {"highest": [sorted(X) for X in highest]},
        )


def product_suite(A: SRing, decomposition: Decomposition) -> Report:
    """Projection and tensor checks for ``G = G1 x G2`` when both components are A-groups."""
    if decomposition.group != A.group:
        raise UsageError("decomposition belongs to another group")
    G = A.group
    report = Report()
    G1, G2 = decomposition.G1, decomposition.G2
    if not (A.is_a_group(G1) and A.is_a_group(G2)):
        return report
    classes = {frozenset(X) for X in A.classes}
    for side in (1, 2):
        pr = decomposition.projection_array(side)
        for X in A.classes:
            img = frozenset(int(pr[x]) for x in X)
            report.add("projection-is-class", img in classes, {"class": list(X), "side": side})
    C1, C2 = A.classes_inside(G1.members), A.classes_inside(G2.members)
    parts = [frozenset(_sumset(G, X, Y)) for X in C1 for Y in C2]
    owner = {}
    for i, part in enumerate(parts):
        for x in part:
            owner[x] = i
    refines = all(len({owner[x] for x in X}) == 1 for X in A.classes)
    report.add("refines-tensor", refines, {})
    if len(C1) == G1.order or len(C2) == G2.order:
        report.add("equals-tensor", set(parts) == classes, {})
    return report


def factor_decompositions(G: AbelianGroup) -> list[Decomposition]:
    """Every split of the listed cyclic factors into two nonempty parts, each split once."""
    out = []
    r = G.rank
    for mask in range(1, 2**r - 1):
        first = tuple(j for j in range(r) if mask >> j & 1)
        if 0 not in first:
            continue
        out.append(Decomposition(G, first))
    return out

