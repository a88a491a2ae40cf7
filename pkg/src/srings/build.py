"""Constructors: cyclotomic, orbit, tensor and generalized wreath S-rings."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import GluingError, NestingError, NotAnAutomorphismError, PreconditionError
from .groups import AbelianGroup, Subgroup, direct_product, is_automorphism, make_section, trivial_subgroup, whole_group
from .perms import PermGroup, labels_to_partition, right_translations
from .sring import SRing, verify_sring


def group_ring(G: AbelianGroup) -> SRing:
    """The S-ring with singleton classes."""
    return SRing(G, [(x,) for x in range(G.order)])


def rank_two(G: AbelianGroup) -> SRing:
    if G.order == 1:
        return SRing(G, [(0,)])
    return SRing(G, [(0,), tuple(range(1, G.order))])


def _as_generators(K: PermGroup | Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    if isinstance(K, PermGroup):
        return list(K.generators)
    return [tuple(int(x) for x in g) for g in K]


def cyclotomic(K: PermGroup | Iterable[Sequence[int]], G: AbelianGroup) -> SRing:
    """``cyc(K, G)``: classes are the orbits of a group ``K`` of automorphisms of ``G``."""
    gens = _as_generators(K)
    for g in gens:
        if not is_automorphism(G, g):
            raise NotAnAutomorphismError(f"{list(g)} is not an automorphism of {list(G.factors)}")
    labels = PermGroup(G.order, gens).orbit_labels()
    return verify_sring(G, labels_to_partition(labels))


def orbit_sring(Gamma: PermGroup, G: AbelianGroup) -> SRing:
    """Classes are the orbits of the stabilizer of 0 in ``Gamma``, which must contain ``G_right``."""
    if Gamma.degree != G.order:
        raise PreconditionError("permutation group acts on a domain of the wrong size")
    if not right_translations(G).is_subgroup(Gamma):
        raise PreconditionError("the group does not contain all right translations")
    stab = Gamma.stabilizer(0)
    return verify_sring(G, labels_to_partition(stab.orbit_labels()))


def tensor(A1: SRing, A2: SRing) -> SRing:
    """Product classes over ``G1 x G2`` (indexed as ``a * |G2| + b``)."""
    G = direct_product(A1.group, A2.group)
    n2 = A2.group.order
    classes = [tuple(a * n2 + b for a in X for b in Y) for X in A1.classes for Y in A2.classes]
    return verify_sring(G, classes)


def _check_homomorphism(src: AbelianGroup, dst: AbelianGroup, f: np.ndarray, what: str) -> None:
    if len(f) != src.order or f[0] != 0:
        raise PreconditionError(f"{what} is not a homomorphism")
    if not np.array_equal(f[src.add_table], dst.add_table[np.ix_(f, f)]):
        raise PreconditionError(f"{what} is not a homomorphism")


def wreath(
    G: AbelianGroup,
    U: Subgroup,
    L: Subgroup,
    A1: SRing,
    A2: SRing,
    embed: Sequence[int] | None = None,
    project: Sequence[int] | None = None,
) -> SRing:
    """The generalized wreath product of ``A1`` (over ``U``) and ``A2`` (over ``G/L``).

    ``embed`` maps indices of ``A1.group`` injectively onto ``U`` and
    ``project`` maps ``G`` onto ``A2.group`` with kernel ``L``.  When omitted
    they default to the maps of ``make_section(U, 1)`` and ``make_section(G, L)``.
    """
    if U.owner != G or L.owner != G:
        raise PreconditionError("U and L must be subgroups of G")
    if not L.member_set <= U.member_set:
        raise NestingError("L is not contained in U")
    if embed is None:
        sec = make_section(U, trivial_subgroup(G))
        if A1.group != sec.quotient:
            raise PreconditionError(f"A1 must live on {list(sec.quotient.factors)} to use the default embedding")
        embed = sec.lift
    if project is None:
        sec = make_section(whole_group(G), L)
        if A2.group != sec.quotient:
            raise PreconditionError(f"A2 must live on {list(sec.quotient.factors)} to use the default projection")
        project = sec.project
    emb = np.asarray(embed, dtype=np.int64)
    pr = np.asarray(project, dtype=np.int64)
    _check_homomorphism(A1.group, G, emb, "embedding")
    if sorted(emb.tolist()) != list(U.members):
        raise PreconditionError("embedding is not a bijection onto U")
    _check_homomorphism(G, A2.group, pr, "projection")
    if sorted(np.flatnonzero(pr == 0).tolist()) != list(L.members) or len(set(pr.tolist())) != A2.group.order:
        raise PreconditionError("projection must be onto with kernel L")

    image_u = frozenset(int(q) for q in pr[list(U.members)])
    from_a1 = set()
    for X in A1.classes:
        Y = frozenset(int(q) for q in pr[emb[list(X)]])
        from_a1.add(Y)
    seen: set[int] = set()
    for Y in from_a1:
        if seen & Y:
            raise GluingError("images of the classes of A1 overlap", {"class": sorted(Y)})
        seen |= Y
    from_a2 = {frozenset(Y) for Y in A2.classes if set(Y) <= image_u}
    if from_a1 != from_a2:
        diff = sorted(from_a1 ^ from_a2, key=lambda s: (min(s), len(s)))[0]
        side = "A1" if diff in from_a1 else "A2"
        raise GluingError(
            "the two S-rings induce different S-rings on U/L",
            {"class": sorted(diff), "only_in": side},
        )
    classes = [tuple(int(v) for v in emb[list(X)]) for X in A1.classes]
    for Y in A2.classes:
        if set(Y) <= image_u:
            continue
        classes.append(tuple(int(x) for x in np.flatnonzero(np.isin(pr, list(Y)))))
    return verify_sring(G, classes)
