"""The S-ring data type and its structural operations.

An S-ring over an abelian group ``G`` is stored by its partition of ``G``
into basic sets ("classes").  Classes are sorted tuples of element indices;
the class list is sorted by smallest element, so class 0 is always ``(0,)``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import (
    AxiomViolation,
    InconsistencyError,
    NotAnAGroupError,
    NotASectionError,
    PartitionError,
    PreconditionError,
)
from .groups import (
    AbelianGroup,
    Section,
    Subgroup,
    _prime_factors,
    join,
    make_section,
    meet,
    subgroup_generated,
    trivial_subgroup,
    whole_group,
)

Class = tuple[int, ...]


def _canonical_classes(classes: Iterable[Iterable[int]]) -> tuple[Class, ...]:
    return tuple(sorted((tuple(sorted(int(x) for x in c)) for c in classes), key=lambda c: c[0]))


def labels_to_classes(labels: np.ndarray) -> tuple[Class, ...]:
    order = np.argsort(labels, kind="stable")
    lab = labels[order]
    cuts = np.flatnonzero(np.diff(lab)) + 1
    return _canonical_classes(np.split(order, cuts))


class SRing:
    """An S-ring given by its basic sets.

    Build instances through :func:`verify_sring`, :func:`closure` or the
    constructors in :mod:`srings.build`; the initializer trusts its input.
    """

    def __init__(self, group: AbelianGroup, classes: Iterable[Iterable[int]]):
        self.group = group
        self.classes: tuple[Class, ...] = _canonical_classes(classes)
        self._constants: dict[tuple[int, int], np.ndarray] = {}
        # memoized derived data such as automorphism generators
        self.cache: dict[str, object] = {}

    @classmethod
    def from_labels(cls, group: AbelianGroup, labels: np.ndarray) -> SRing:
        return cls(group, labels_to_classes(np.asarray(labels)))

    def __repr__(self) -> str:
        return f"SRing(group={list(self.group.factors)}, rank={self.rank})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SRing) and self.group == other.group and self.classes == other.classes

    def __hash__(self) -> int:
        return hash((self.group, self.classes))

    @property
    def rank(self) -> int:
        return len(self.classes)

    @cached_property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.group.order, dtype=np.int64)
        for i, c in enumerate(self.classes):
            out[list(c)] = i
        return out

    @cached_property
    def inverse_class(self) -> np.ndarray:
        """``inverse_class[i]`` is the index of the class ``-X_i``."""
        neg = self.group.neg
        return np.array([self.class_of[neg[c[0]]] for c in self.classes], dtype=np.int64)

    def class_containing(self, x: int) -> Class:
        return self.classes[int(self.class_of[x])]

    def class_index(self, X: Iterable[int]) -> int:
        X = tuple(sorted(X))
        i = int(self.class_of[X[0]])
        if self.classes[i] != X:
            raise ValueError(f"{list(X)} is not a basic set")
        return i

    @cached_property
    def color_matrix(self) -> np.ndarray:
        """``C[x, y]`` is the class index of ``y - x``."""
        return self.class_of[self.group.sub_table.T]

    def structure_constants(self, i: int, j: int) -> np.ndarray:
        """``out[k]`` is the number of ``(x, y)`` in ``X_i x X_j`` with ``x + y = z`` for ``z`` in ``X_k``."""
        key = (i, j)
        got = self._constants.get(key)
        if got is None:
            G = self.group
            sums = G.add_table[np.ix_(list(self.classes[i]), list(self.classes[j]))].ravel()
            counts = np.bincount(sums, minlength=G.order)
            got = counts[[c[0] for c in self.classes]]
            self._constants[key] = got
        return got

    def is_a_set(self, X: Iterable[int]) -> bool:
        X = set(int(x) for x in X)
        return all(set(self.class_containing(x)) <= X for x in X)

    def is_a_group(self, H: Subgroup) -> bool:
        return self.is_a_set(H.members)

    def classes_inside(self, X: Iterable[int]) -> list[Class]:
        X = set(X)
        return [c for c in self.classes if set(c) <= X]

    def to_json(self) -> dict:
        return {"group": {"factors": list(self.group.factors)}, "classes": [list(c) for c in self.classes]}


# validation


def check_partition(G: AbelianGroup, sets: Sequence[Iterable[int]]) -> list[Class]:
    out = []
    seen = np.full(G.order, -1, dtype=np.int64)
    for i, s in enumerate(sets):
        s = tuple(sorted(int(x) for x in s))
        if not s:
            raise PartitionError("empty set in partition", {"set": i})
        if len(set(s)) != len(s):
            raise PartitionError("repeated element inside a set", {"set": i})
        for x in s:
            if not 0 <= x < G.order:
                raise PartitionError(f"element {x} is not in the group", {"element": x})
            if seen[x] >= 0:
                raise PartitionError(f"element {x} lies in two sets", {"element": x, "sets": [int(seen[x]), i]})
            seen[x] = i
        out.append(s)
    missing = np.flatnonzero(seen < 0)
    if len(missing):
        raise PartitionError("sets do not cover the group", {"missing": [int(x) for x in missing[:10]]})
    return out


def find_violation(G: AbelianGroup, classes: Sequence[Iterable[int]]) -> AxiomViolation | None:
    """The first failed axiom with a witness, or None for a valid S-ring."""
    classes = list(_canonical_classes(check_partition(G, classes)))
    if classes[0] != (0,):
        return AxiomViolation("S1", {"class": list(classes[0])})
    n = G.order
    rank = len(classes)
    class_of = np.empty(n, dtype=np.int64)
    for i, c in enumerate(classes):
        class_of[list(c)] = i
    neg = G.neg
    for c in classes:
        inv = tuple(sorted(int(neg[x]) for x in c))
        if classes[class_of[inv[0]]] != inv:
            return AxiomViolation("S2", {"X": list(c), "inverse": list(inv)})
    reps = np.array([c[0] for c in classes])
    for i, X in enumerate(classes):
        # counts[j, z] = #{x in X, y in X_j : x + y = z}
        sums = G.add_table[list(X), :]
        idx = class_of[None, :] * n + sums
        counts = np.bincount(idx.ravel(), minlength=rank * n).reshape(rank, n)
        expected = counts[:, reps][:, class_of]
        bad = np.argwhere(counts != expected)
        if len(bad):
            j, z = (int(v) for v in bad[0])
            k = int(class_of[z])
            z0 = int(reps[k])
            return AxiomViolation(
                "S3",
                {
                    "X": list(X),
                    "Y": list(classes[j]),
                    "Z": list(classes[k]),
                    "z": z0,
                    "z_prime": z,
                    "count_z": int(counts[j, z0]),
                    "count_z_prime": int(counts[j, z]),
                },
            )
    return None


def verify_sring(G: AbelianGroup, partition: Sequence[Iterable[int]]) -> SRing:
    """Return the S-ring, or raise :class:`AxiomViolation` / :class:`PartitionError`."""
    violation = find_violation(G, partition)
    if violation is not None:
        raise violation
    return SRing(G, partition)


def is_sring(G: AbelianGroup, partition: Sequence[Iterable[int]]) -> bool:
    try:
        return find_violation(G, partition) is None
    except PartitionError:
        return False


# closure


def _relabel(rows: np.ndarray) -> np.ndarray:
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def closure_labels(G: AbelianGroup, labels: np.ndarray) -> np.ndarray:
    """Coarsest S-ring partition refining ``labels`` with ``{0}`` split off."""
    n = G.order
    lab = np.asarray(labels, dtype=np.int64).copy()
    lab = _relabel(np.column_stack([lab, np.arange(n) == 0]))
    neg = G.neg
    sub = G.sub_table
    count = -1
    while True:
        lab = _relabel(np.column_stack([lab, lab[neg]]))
        m = int(lab.max()) + 1
        if m == count:
            return lab
        count = m
        # for each z and each class X: the multiset of classes of z - x over x in X
        order = np.argsort(lab, kind="stable")
        blocks = [lab]
        cuts = np.flatnonzero(np.diff(lab[order])) + 1
        for X in np.split(order, cuts):
            if len(X) == n:
                continue
            blocks.append(np.sort(lab[sub[:, X]], axis=1))
        lab = _relabel(np.column_stack(blocks))
        if int(lab.max()) + 1 == m:
            return lab


def closure(G: AbelianGroup, seeds: Iterable[Iterable[int]] = ()) -> SRing:
    """The smallest S-ring over ``G`` in which every seed is a union of classes."""
    cols = [np.zeros(G.order, dtype=np.int64)]
    for s in seeds:
        col = np.zeros(G.order, dtype=np.int64)
        members = [int(x) for x in s]
        if any(not 0 <= x < G.order for x in members):
            raise ValueError("seed element outside the group")
        col[members] = 1
        cols.append(col)
    lab = closure_labels(G, _relabel(np.column_stack(cols)))
    return verify_sring(G, labels_to_classes(lab))


# subgroups attached to an S-ring


def radical(G: AbelianGroup | SRing, X: Iterable[int]) -> Subgroup:
    """``{g : X + g = X}``."""
    if isinstance(G, SRing):
        G = G.group
    X = sorted(set(int(x) for x in X))
    if not X:
        return whole_group(G)
    mask = np.zeros(G.order, dtype=bool)
    mask[X] = True
    stable = mask[G.add_table[X, :]].all(axis=0)
    return Subgroup(G, tuple(int(g) for g in np.flatnonzero(stable)))


def a_subgroups(A: SRing) -> list[Subgroup]:
    """All subgroups that are unions of classes, sorted by ``(order, members)``."""
    G = A.group
    found: dict[tuple[int, ...], Subgroup] = {}
    base = [trivial_subgroup(G)] + [subgroup_generated(G, X) for X in A.classes]
    for H in base:
        found.setdefault(H.members, H)
    atoms = list(found.values())
    frontier = list(atoms)
    while frontier:
        new = []
        for H in frontier:
            for K in atoms:
                J = join(H, K)
                if J.members not in found:
                    found[J.members] = J
                    new.append(J)
        frontier = new
    out = sorted(found.values(), key=lambda H: (H.order, H.members))
    for H in out:
        if not A.is_a_set(H.members):
            raise InconsistencyError(f"subgroup generated by classes is not an A-set: {list(H.members)}")
    keys = set(found)
    for H in out:
        for K in out:
            if meet(H, K).members not in keys:
                raise InconsistencyError("A-subgroups are not closed under intersection")
    return out


def _require_a_group(A: SRing, H: Subgroup) -> None:
    if H.owner != A.group:
        raise NotAnAGroupError("subgroup belongs to a different group")
    if not A.is_a_group(H):
        raise NotAnAGroupError(f"{list(H.members)} is not a union of basic sets")


def restrict_to_section(A: SRing, section: Section) -> SRing:
    """The S-ring induced on ``section.quotient`` (``U/L`` with ``L`` possibly trivial)."""
    _require_a_group(A, section.U)
    _require_a_group(A, section.L)
    images = {section.image(X) for X in A.classes_inside(section.U.members)}
    parts = [sorted(c) for c in images]
    try:
        return verify_sring(section.quotient, parts)
    except PartitionError as exc:
        raise InconsistencyError(f"class images do not partition the quotient: {exc}") from exc


def restrict(A: SRing, U: Subgroup) -> SRing:
    """``A_U``: the classes of ``A`` inside the A-group ``U``, as an S-ring over ``U``."""
    _require_a_group(A, U)
    if U.order == A.group.order:
        return A
    return restrict_to_section(A, make_section(U, trivial_subgroup(A.group)))


def quotient_sring(A: SRing, S: Section) -> SRing:
    """``A_S`` for an A-section ``S = U/L``."""
    try:
        _require_a_group(A, S.U)
        _require_a_group(A, S.L)
    except NotAnAGroupError as exc:
        raise NotASectionError(str(exc)) from exc
    return restrict_to_section(A, S)


def is_a_section(A: SRing, S: Section) -> bool:
    return A.is_a_group(S.U) and A.is_a_group(S.L)


# structural facts exposed as checks


class PowerSet(NamedTuple):
    elements: frozenset[int]
    is_a_set: bool


def p_torsion(G: AbelianGroup, p: int) -> Subgroup:
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(G.multiples(p) == 0)))


def wielandt_power(A: SRing, X: Iterable[int], p: int) -> PowerSet:
    """``{p*x : x in X, |(x + H) & X| not divisible by p}`` where ``H`` is the ``p``-torsion."""
    G = A.group
    if G.order % p != 0 or len(_prime_factors(p)) != 1 or _prime_factors(p).get(p) != 1:
        raise PreconditionError(f"{p} is not a prime divisor of {G.order}")
    X = sorted(set(int(x) for x in X))
    H = list(p_torsion(G, p).members)
    mask = np.zeros(G.order, dtype=bool)
    mask[X] = True
    counts = mask[G.add_table[np.ix_(X, H)]].sum(axis=1)
    mult = G.multiples(p)
    out = frozenset(int(mult[x]) for x, c in zip(X, counts) if c % p != 0)
    return PowerSet(out, A.is_a_set(out))


def coset_count_profile(A: SRing, H: Subgroup, X: Iterable[int]) -> int:
    """The common value of ``|X & (H + x)|`` over ``x`` in ``X``."""
    _require_a_group(A, H)
    G = A.group
    X = sorted(set(int(x) for x in X))
    mask = np.zeros(G.order, dtype=bool)
    mask[X] = True
    counts = mask[G.add_table[np.ix_(X, list(H.members))]].sum(axis=1)
    if len(set(counts.tolist())) > 1:
        raise InconsistencyError(f"|X & (H + x)| takes the values {sorted(set(counts.tolist()))}")
    return int(counts[0])


def cayley_isomorphisms(A: SRing, B: SRing, limit: int | None = None) -> list[tuple[int, ...]]:
    """Every group isomorphism mapping the classes of ``A`` onto the classes of ``B``."""
    G, K = A.group, B.group
    if G.order != K.order or G.normal_form != K.normal_form or A.rank != B.rank:
        return []
    if sorted(map(len, A.classes)) != sorted(map(len, B.classes)):
        return []
    if G.rank == 0:
        return [(0,)]
    sizes_a = np.array([len(A.classes[i]) for i in A.class_of])
    sizes_b = np.array([len(B.classes[i]) for i in B.class_of])
    out: list[tuple[int, ...]] = []

    def rec(j: int, image: dict[int, int], cmap: dict[int, int], rmap: dict[int, int]) -> None:
        if limit is not None and len(out) >= limit:
            return
        if j == G.rank:
            f = tuple(image[x] for x in range(G.order))
            out.append(f)
            return
        e = G.unit(j)
        n = G.factors[j]
        for h in range(K.order):
            if K.element_order(h) != n or sizes_b[h] != sizes_a[e]:
                continue
            new = dict(image)
            cm, rm = dict(cmap), dict(rmap)
            ok = True
            for s, t in image.items():
                a, b = s, t
                for _ in range(1, n):
                    a = int(G.add_table[a, e])
                    b = int(K.add_table[b, h])
                    ca, cb = int(A.class_of[a]), int(B.class_of[b])
                    if cm.setdefault(ca, cb) != cb or rm.setdefault(cb, ca) != ca:
                        ok = False
                        break
                    new[a] = b
                if not ok:
                    break
            if ok and len(set(new.values())) == len(new):
                rec(j + 1, new, cm, rm)

    rec(0, {0: 0}, {0: 0}, {0: 0})
    return out


@dataclass(frozen=True)
class WreathDecomposition:
    U: Subgroup
    L: Subgroup
    proper: bool

    @property
    def section(self) -> Section:
        return make_section(self.U, self.L)


def is_wreath_decomposition(A: SRing, U: Subgroup, L: Subgroup) -> bool:
    """``L <= U`` are A-groups and ``L <= rad(X)`` for every class ``X`` outside ``U``."""
    if not (A.is_a_group(U) and A.is_a_group(L) and L.member_set <= U.member_set):
        return False
    G = A.group
    lm = list(L.members)
    for X in A.classes:
        if set(X) <= U.member_set:
            continue
        mask = np.zeros(G.order, dtype=bool)
        mask[list(X)] = True
        if not mask[G.add_table[np.ix_(list(X), lm)]].all():
            return False
    return True


def wreath_decompositions(A: SRing) -> list[WreathDecomposition]:
    G = A.group
    groups = a_subgroups(A)
    out = []
    for U in groups:
        for L in groups:
            if L.member_set <= U.member_set and is_wreath_decomposition(A, U, L):
                proper = L.order > 1 and U.order < G.order
                out.append(WreathDecomposition(U, L, proper))
    return out
