"""Automorphisms of an edge-colored complete digraph by individualization-refinement.

The structure is an ``n x n`` integer matrix ``C``; a permutation ``f`` is an
automorphism when ``C[f[x], f[y]] == C[x, y]`` for all ``x, y``.  Vertex
partitions are label arrays whose numbering is derived only from invariant
data, so two partitions that correspond under an automorphism carry the same
labels and the same trace.
"""

from __future__ import annotations

import hashlib
from collections.abc import Sequence

import numpy as np

from . import config
from .errors import ResourceError

Perm = tuple[int, ...]


class Refiner:
    def __init__(self, colors: np.ndarray):
        colors = np.asarray(colors, dtype=np.int64)
        if colors.ndim != 2 or colors.shape[0] != colors.shape[1]:
            raise ValueError("color matrix must be square")
        self.C = colors
        self.n = colors.shape[0]
        self.nodes = 0

    def refine(self, cid: np.ndarray) -> tuple[np.ndarray, bytes]:
        """Refine to the coarsest equitable partition below ``cid``.

        Returns the new labels and a digest of every refinement round.
        """
        self.nodes += 1
        if self.nodes > config.SEARCH_BOUND:
            raise ResourceError("automorphism search exceeded its node bound")
        digest = hashlib.sha1()
        m = int(cid.max()) + 1 if self.n else 0
        while True:
            sig = np.sort(self.C * m + cid[None, :], axis=1)
            rows = np.column_stack([cid, sig])
            uniq, inv = np.unique(rows, axis=0, return_inverse=True)
            digest.update(np.int64(len(uniq)).tobytes())
            digest.update(uniq.tobytes())
            cid = inv.reshape(-1).astype(np.int64)
            if len(uniq) == m:
                return cid, digest.digest()
            m = len(uniq)

    @staticmethod
    def individualize(cid: np.ndarray, v: int) -> np.ndarray:
        """Split ``v`` off its cell, placing it before the rest of the cell."""
        out = cid * 2 + 1
        out[v] -= 1
        _, inv = np.unique(out, return_inverse=True)
        return inv.reshape(-1).astype(np.int64)

    def root(self) -> tuple[np.ndarray, bytes]:
        return self.refine(np.zeros(self.n, dtype=np.int64))

    def descend(self, cid: np.ndarray, v: int) -> tuple[np.ndarray, bytes]:
        new, digest = self.refine(self.individualize(cid, v))
        return new, int(cid[v]).to_bytes(8, "little") + digest

    def trace_of(self, points: Sequence[int]) -> tuple[np.ndarray, list[bytes]]:
        """Individualize ``points`` one after another, recording every trace."""
        cid, digest = self.root()
        traces = [digest]
        for v in points:
            cid, digest = self.descend(cid, v)
            traces.append(digest)
        return cid, traces

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        p = np.asarray(perm)
        return bool(np.array_equal(self.C[np.ix_(p, p)], self.C))


def target_cell(cid: np.ndarray) -> np.ndarray | None:
    """Smallest non-singleton cell, lowest label on ties."""
    counts = np.bincount(cid)
    big = np.flatnonzero(counts > 1)
    if len(big) == 0:
        return None
    c = big[np.argmin(counts[big])]
    return np.flatnonzero(cid == c)


def _leaf_perm(first_leaf: np.ndarray, leaf: np.ndarray) -> Perm:
    inv = np.empty_like(leaf)
    inv[leaf] = np.arange(len(leaf))
    return tuple(int(v) for v in inv[first_leaf])


def _orbit(gens: list[Perm], point: int) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def automorphism_generators(colors: np.ndarray, fixed: Sequence[int] = (0,)) -> list[Perm]:
    """Generators of the automorphisms that fix every point of ``fixed``.

    The search individualizes ``fixed`` first and then follows a first path
    of target-cell choices.  Going back up that path, each sibling ``w`` of
    the path vertex ``v`` at depth ``d`` is tried unless an automorphism
    already found (they all fix the earlier path vertices) maps ``v`` to
    ``w`` or a failed sibling to ``w``.
    """
    ref = Refiner(colors)
    cid, _ = ref.root()
    for v in fixed:
        cid, _ = ref.descend(cid, v)

    path: list[tuple[np.ndarray, np.ndarray, int]] = []
    traces: list[bytes] = []
    while True:
        cell = target_cell(cid)
        if cell is None:
            break
        v = int(cell[0])
        path.append((cid, cell, v))
        cid, digest = ref.descend(cid, v)
        traces.append(digest)
    first_leaf = cid

    def search_any(depth: int, cid: np.ndarray) -> Perm | None:
        cell = target_cell(cid)
        if cell is None:
            perm = _leaf_perm(first_leaf, cid)
            return perm if ref.is_automorphism(perm) else None
        for w in cell:
            nxt, digest = ref.descend(cid, int(w))
            if digest != traces[depth]:
                continue
            found = search_any(depth + 1, nxt)
            if found is not None:
                return found
        return None

    gens: list[Perm] = []
    for depth in reversed(range(len(path))):
        cid, cell, v = path[depth]
        reached = _orbit(gens, v)
        failed: set[int] = set()
        for w in cell:
            w = int(w)
            if w in reached or w in failed:
                continue
            nxt, digest = ref.descend(cid, w)
            perm = search_any(depth + 1, nxt) if digest == traces[depth] else None
            if perm is None:
                failed |= _orbit(gens, w)
            else:
                gens.append(perm)
                reached = _orbit(gens, v)
    return gens


def find_automorphism(colors: np.ndarray, source: Sequence[int], target: Sequence[int]) -> Perm | None:
    """Some automorphism mapping ``source[i]`` to ``target[i]`` for all ``i``, or None."""
    if len(source) != len(target):
        raise ValueError("source and target must have equal length")
    ref = Refiner(colors)
    cid_a, tr_a = ref.trace_of(source)
    cid_b, tr_b = ref.trace_of(target)
    if tr_a != tr_b:
        return None

    path_traces: list[bytes] = []
    cid = cid_a
    while True:
        cell = target_cell(cid)
        if cell is None:
            break
        cid, digest = ref.descend(cid, int(cell[0]))
        path_traces.append(digest)
    first_leaf = cid

    def search(depth: int, cid: np.ndarray) -> Perm | None:
        cell = target_cell(cid)
        if cell is None:
            perm = _leaf_perm(first_leaf, cid)
            return perm if ref.is_automorphism(perm) else None
        for w in cell:
            nxt, digest = ref.descend(cid, int(w))
            if digest == path_traces[depth]:
                found = search(depth + 1, nxt)
                if found is not None:
                    return found
        return None

    return search(0, cid_b)


def separated_by_refinement(colors: np.ndarray, source: Sequence[int], target: Sequence[int]) -> bool:
    """True when refinement alone proves no automorphism maps ``source`` to ``target``."""
    ref = Refiner(colors)
    _, tr_a = ref.trace_of(source)
    _, tr_b = ref.trace_of(target)
    return tr_a != tr_b
