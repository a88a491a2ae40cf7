"""Permutations and permutation groups on ``{0, ..., n-1}``.

A permutation is a tuple of images.  Products act on the right: ``mul(a, b)``
first applies ``a`` and then ``b``, so ``mul(a, b)[x] == b[a[x]]``.
"""

from __future__ import annotations

import threading
from collections.abc import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import config
from .errors import DomainMismatchError, ResourceError

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


def mul(a: Sequence[int], b: Sequence[int]) -> Perm:
    return tuple(b[x] for x in a)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def conjugate(g: Perm, h: Perm) -> Perm:
    """``h^-1 g h``."""
    return mul(mul(inverse(h), g), h)


def is_permutation(p: Sequence[int], n: int | None = None) -> bool:
    n = len(p) if n is None else n
    return len(p) == n and sorted(p) == list(range(n))


def first_moved(p: Sequence[int]) -> int | None:
    for i, x in enumerate(p):
        if i != x:
            return i
    return None


class _Level:
    __slots__ = ("point", "gens", "trans")

    def __init__(self, point: int, n: int):
        self.point = point
        self.gens: list[Perm] = []
        self.trans: dict[int, Perm] = {point: identity(n)}


class PermGroup:
    """A permutation group given by generators.

    The stabilizer chain is built on first use by the deterministic
    Schreier-Sims procedure: every Schreier generator of a level is sifted
    into the levels below it.  Base points are taken from ``base`` when given
    and otherwise are the smallest point moved by the element being added.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = (), base: Sequence[int] = ()):
        self.degree = degree
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if len(g) != degree:
                raise DomainMismatchError(f"generator of length {len(g)} on a domain of size {degree}")
            if not is_identity(g):
                gens.append(g)
        self.generators: tuple[Perm, ...] = tuple(gens)
        self._base_prefix = tuple(base)
        self._levels: list[_Level] | None = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"

    # chain construction

    @property
    def levels(self) -> list[_Level]:
        if self._levels is None:
            with self._lock:
                if self._levels is None:
                    self._levels = self._build()
        return self._levels

    def _build(self) -> list[_Level]:
        n = self.degree
        levels: list[_Level] = []
        prefix = self._base_prefix

        def new_level(j: int, g: Perm) -> None:
            point = prefix[j] if j < len(prefix) else first_moved(g)
            levels.append(_Level(point, n))

        def sift(j: int, h: Perm) -> tuple[int, Perm]:
            while j < len(levels):
                if is_identity(h):
                    return j, h
                lev = levels[j]
                p = h[lev.point]
                u = lev.trans.get(p)
                if u is None:
                    return j, h
                h = mul(h, inverse(u))
                j += 1
            return j, h

        def insert(j: int, h: Perm) -> None:
            j, h = sift(j, h)
            if not is_identity(h):
                add_gen(j, h)

        def add_gen(j: int, g: Perm) -> None:
            # g fixes b_0 .. b_{j-1}, so it belongs to every level up to j
            if j == len(levels):
                new_level(j, g)
            for i in range(j, -1, -1):
                extend(i, g)

        def extend(j: int, g: Perm) -> None:
            lev = levels[j]
            lev.gens.append(g)
            # pairs (point, generator) whose Schreier generator is still unchecked
            todo = [(p, g) for p in list(lev.trans)]
            while todo:
                p, s = todo.pop()
                q = s[p]
                up = lev.trans[p]
                ups = mul(up, s)
                uq = lev.trans.get(q)
                if uq is None:
                    lev.trans[q] = ups
                    todo.extend((q, t) for t in lev.gens)
                    continue
                h = mul(ups, inverse(uq))
                if not is_identity(h):
                    insert(j + 1, h)

        for g in self.generators:
            insert(0, g)
        return levels

    # queries

    @property
    def base(self) -> list[int]:
        return [lev.point for lev in self.levels]

    @property
    def strong_generators(self) -> list[Perm]:
        return [g for lev in self.levels for g in lev.gens]

    def order(self) -> int:
        out = 1
        for lev in self.levels:
            out *= len(lev.trans)
        return out

    def sift(self, g: Sequence[int]) -> Perm:
        h = tuple(g)
        for lev in self.levels:
            u = lev.trans.get(h[lev.point])
            if u is None:
                return h
            h = mul(h, inverse(u))
        return h

    def contains(self, g: Sequence[int]) -> bool:
        if len(g) != self.degree:
            raise DomainMismatchError("permutation has the wrong degree")
        return is_identity(self.sift(g))

    __contains__ = contains

    def is_trivial(self) -> bool:
        return not self.generators

    def elements(self, limit: int | None = None) -> Iterator[Perm]:
        limit = config.SEARCH_BOUND if limit is None else limit
        if self.order() > limit:
            raise ResourceError(f"group of order {self.order()} is too large to list")
        levels = self.levels

        def rec(j: int, acc: Perm) -> Iterator[Perm]:
            if j < 0:
                yield acc
                return
            for u in levels[j].trans.values():
                yield from rec(j - 1, mul(acc, u))

        yield from rec(len(levels) - 1, identity(self.degree))

    def stabilizer(self, point: int) -> PermGroup:
        """Point stabilizer, computed from a chain whose base starts at ``point``."""
        if not 0 <= point < self.degree:
            raise IndexError(f"point {point} outside the domain")
        rebased = PermGroup(self.degree, self.generators, base=[point])
        levels = rebased.levels
        if not levels:
            return PermGroup(self.degree, [])
        gens = [g for lev in levels[1:] for g in lev.gens]
        rest = [lev.point for lev in levels[1:]]
        stab = PermGroup(self.degree, gens, base=rest)
        return stab

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        stack = [point]
        while stack:
            x = stack.pop()
            for g in self.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return sorted(seen)

    def orbits(self) -> list[tuple[int, ...]]:
        return orbits(self)

    def orbit_labels(self) -> np.ndarray:
        return _components(self.degree, [np.asarray(g) for g in self.generators])

    def is_subgroup(self, other: PermGroup) -> bool:
        """Whether ``self`` is contained in ``other``."""
        _same_domain(self, other)
        return all(other.contains(g) for g in self.generators)

    def is_normal_in(self, other: PermGroup) -> bool:
        """Whether ``self`` is a normal subgroup of ``other``."""
        if not self.is_subgroup(other):
            return False
        return all(self.contains(conjugate(g, h)) for h in other.generators for g in self.generators)

    def equals(self, other: PermGroup) -> bool:
        return self.is_subgroup(other) and other.is_subgroup(self)


def _same_domain(a: PermGroup, b: PermGroup) -> None:
    if a.degree != b.degree:
        raise DomainMismatchError(f"domains of size {a.degree} and {b.degree}")


def _components(n: int, images: list[np.ndarray]) -> np.ndarray:
    """Connected components of the graph with edges ``x -> g[x]``, labelled in first-seen order."""
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if images:
        src = np.concatenate([np.arange(n)] * len(images))
        dst = np.concatenate(images)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return relabel_first_seen(labels)


def relabel_first_seen(labels: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.reshape(-1)]


def labels_to_partition(labels: np.ndarray) -> list[tuple[int, ...]]:
    parts: dict[int, list[int]] = {}
    for x, c in enumerate(labels):
        parts.setdefault(int(c), []).append(x)
    return sorted((tuple(v) for v in parts.values()), key=lambda c: c[0])


def orbits(group: PermGroup) -> list[tuple[int, ...]]:
    """The orbit partition, each orbit sorted, orbits ordered by smallest point."""
    return labels_to_partition(group.orbit_labels())


def orbitals(group: PermGroup, bound: int | None = None) -> np.ndarray:
    """Orbit coloring of ordered pairs: entry ``x*n + y`` is the color of ``(x, y)``.

    Colors are numbered in order of first appearance.
    """
    bound = config.ORBITAL_BOUND if bound is None else bound
    n = group.degree
    if n > bound:
        raise ResourceError(f"orbitals on {n} points exceed the bound {bound}")
    pair = np.arange(n * n).reshape(n, n)
    images = [pair[np.ix_(np.asarray(g), np.asarray(g))].reshape(-1) for g in group.generators]
    return _components(n * n, images)


def orbital_count(group: PermGroup) -> int:
    return int(orbitals(group).max()) + 1 if group.degree else 0


def two_equivalent(a: PermGroup, b: PermGroup) -> bool:
    _same_domain(a, b)
    return bool(np.array_equal(orbitals(a), orbitals(b)))


def symmetric_group(n: int) -> PermGroup:
    gens = []
    if n >= 2:
        gens.append((1, 0) + tuple(range(2, n)))
    if n >= 3:
        gens.append(tuple(range(1, n)) + (0,))
    return PermGroup(n, gens)


def right_translations(G) -> PermGroup:
    """The right regular representation of an abelian group ``G``."""
    from .groups import translation

    return PermGroup(G.order, [translation(G, G.unit(j)) for j in range(G.rank)])


# actions on sections


def _preserves_section(f: Sequence[int], umask: np.ndarray, coset: np.ndarray) -> bool:
    f = np.asarray(f)
    inside = np.flatnonzero(umask)
    if not umask[f[inside]].all():
        return False
    # L-cosets inside U must map onto L-cosets
    src = coset[inside]
    dst = coset[f[inside]]
    m = int(src.max()) + 1 if len(src) else 0
    target = np.full(m, -1, dtype=np.int64)
    target[src] = dst
    return bool((target[src] == dst).all())


def section_stabilizer(group: PermGroup, section, G=None) -> PermGroup:
    """The subgroup of elements mapping ``U`` onto itself and permuting its ``L``-cosets."""
    n = group.degree
    umask = section.project >= 0
    coset = section.project
    if G is not None:
        regular = right_translations(G)
        if regular.is_subgroup(group):
            stab0 = group.stabilizer(0)
            if all(_preserves_section(g, umask, coset) for g in stab0.generators):
                from .groups import translation

                gens = list(stab0.generators)
                gens += [translation(G, u) for u in section.U.generators]
                return PermGroup(n, gens)
    return _search_section_stabilizer(group, umask, coset)


def _search_section_stabilizer(group: PermGroup, umask: np.ndarray, coset: np.ndarray) -> PermGroup:
    """Backtrack over the stabilizer chain, pruning on base-point images.

    Elements are written ``u_{k-1} ... u_1 u_0`` with ``u_j`` from the
    transversal of level ``j``; after choosing ``u_0 .. u_j`` the images of
    the base points ``b_0 .. b_j`` are already final.
    """
    n = group.degree
    levels = group.levels
    base = [lev.point for lev in levels]
    found_gens: list[Perm] = []
    found = PermGroup(n, [])
    visited = 0

    def consistent(acc: Perm, j: int) -> bool:
        b, img = base[j], acc[base[j]]
        if umask[b] != umask[img]:
            return False
        if umask[b]:
            for i in range(j):
                bi = base[i]
                if umask[bi] and (coset[bi] == coset[b]) != (coset[acc[bi]] == coset[img]):
                    return False
        return True

    def rec(j: int, acc: Perm) -> None:
        nonlocal visited, found
        visited += 1
        if visited > config.SEARCH_BOUND:
            raise ResourceError("section stabilizer search exceeded its bound")
        if j == len(levels):
            if _preserves_section(acc, umask, coset) and not found.contains(acc):
                found_gens.append(acc)
                found = PermGroup(n, found_gens)
            return
        for u in levels[j].trans.values():
            nxt = mul(u, acc)
            if consistent(nxt, j):
                rec(j + 1, nxt)

    rec(0, identity(n))
    return found


def induced_section_action(group: PermGroup, section, G=None) -> PermGroup:
    """The permutation group on ``U/L`` induced by the elements preserving the section."""
    q = section.quotient.order
    stab = section_stabilizer(group, section, G)
    lift = np.asarray(section.lift)
    proj = np.asarray(section.project)
    gens = []
    for f in stab.generators:
        f = np.asarray(f)
        gens.append(tuple(int(v) for v in proj[f[lift]]))
    return PermGroup(q, gens)
