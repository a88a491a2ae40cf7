"""A non-schurian S-ring over ``G1 x G2`` when both factors have at least two odd-ish prime factors.

Each factor ``Gi`` gets a chain ``1 < Ai <= Bi < Gi`` with ``|Gi/Ai| >= 3``,
``|Bi| >= 3`` and ``|Bi/Ai| <= 2``.  The four small groups ``B1``,
``G1/A1``, ``B2``, ``G2/A2`` each carry one involutory automorphism; the
cyclotomic S-rings of their pairwise products are glued twice by generalized
wreath products and then once more across ``G1 x B2 / A2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .build import cyclotomic, wreath
from .classify import omega_star
from .errors import GluingError, HypothesisError
from .groups import (
    AbelianGroup,
    Section,
    Subgroup,
    all_subgroups,
    direct_product,
    make_group,
    make_section,
    power_map,
    trivial_subgroup,
    whole_group,
)
from .sring import SRing, is_wreath_decomposition

Perm = tuple[int, ...]


def _is_small_legal(G: AbelianGroup) -> bool:
    """Cyclic of odd prime order, cyclic of order 4, or the Klein four-group."""
    nf = G.normal_form
    if nf in ((4,), (2, 2)):
        return True
    return len(nf) == 1 and nf[0] > 2 and all(nf[0] % d for d in range(2, int(nf[0] ** 0.5) + 1))


def _group_of(H: Subgroup) -> AbelianGroup:
    return make_section(H, trivial_subgroup(H.owner)).quotient


def _quotient_group(G: AbelianGroup, A: Subgroup) -> AbelianGroup:
    return make_section(whole_group(G), A).quotient


def choose_chain(G: AbelianGroup) -> tuple[Subgroup, Subgroup]:
    """The lexicographically least ``(A, B)`` satisfying the chain constraints.

    Besides the order conditions both ``B`` and ``G/A`` must be cyclic of odd
    prime order, cyclic of order 4, or elementary of order 4.
    """
    subs = sorted(all_subgroups(G), key=lambda H: H.members)
    for A in subs:
        if A.order == 1 or G.order // A.order < 3:
            continue
        if not _is_small_legal(_quotient_group(G, A)):
            continue
        for B in subs:
            if not A.member_set <= B.member_set or B.order == G.order:
                continue
            if B.order < 3 or B.order // A.order > 2:
                continue
            if _is_small_legal(_group_of(B)):
                return A, B
    raise HypothesisError(f"no admissible chain in a group with factors {list(G.factors)}")


def _has_chain(G: AbelianGroup) -> bool:
    try:
        choose_chain(G)
        return True
    except HypothesisError:
        return False


def reduce_factor(G: AbelianGroup) -> Subgroup:
    """``G`` itself when it admits a chain, else the least subgroup that does."""
    if omega_star(G.order) < 2:
        raise HypothesisError(f"a factor of order {G.order} has fewer than two admissible prime factors")
    if _has_chain(G):
        return whole_group(G)
    for H in all_subgroups(G):
        if H.order < G.order and omega_star(H.order) >= 2 and _has_chain(_group_of(H)):
            return H
    raise HypothesisError(f"no subgroup of {list(G.factors)} admits a chain")


def build_sigma(H: AbelianGroup, alignment: Subgroup | None = None) -> Perm:
    """Inversion on a cyclic group; on a Klein group, the involution fixing ``alignment``.

    For the Klein group the alignment defaults to the diagonal, which makes
    the involution the coordinate swap.
    """
    if not _is_small_legal(H):
        raise HypothesisError(f"no involution prescribed for a group with factors {list(H.factors)}")
    if H.normal_form != (2, 2):
        return power_map(H, -1)
    if alignment is None:
        m = H.index((1, 1)) if H.factors == (2, 2) else 3
    else:
        if alignment.order != 2:
            raise HypothesisError("alignment subgroup must have order 2")
        m = alignment.members[1]
    a, b = [x for x in range(1, 4) if x != m]
    images = list(range(4))
    images[a], images[b] = b, a
    return tuple(images)


def _product_perm(sa: Perm, sb: Perm) -> Perm:
    nb = len(sb)
    return tuple(sa[i] * nb + sb[j] for i in range(len(sa)) for j in range(nb))


def _identity(n: int) -> Perm:
    return tuple(range(n))


def _image_subgroup(group: AbelianGroup, mapping: np.ndarray, members) -> Subgroup:
    return Subgroup(group, tuple(sorted({int(mapping[x]) for x in members})))


@dataclass
class GluedProduct:
    """A wreath product over ``G1 x H`` glued along ``Q1 x H``."""

    group: AbelianGroup
    U: Subgroup
    L: Subgroup
    embed: list[int]
    project: list[int]
    sring: SRing


@dataclass
class CounterexampleWitness:
    G1: AbelianGroup
    G2: AbelianGroup
    factor_subgroups: tuple[Subgroup, Subgroup]
    chains: tuple[tuple[Subgroup, Subgroup], tuple[Subgroup, Subgroup]]
    H: tuple[AbelianGroup, AbelianGroup, AbelianGroup, AbelianGroup]
    alignments: tuple[Subgroup, Subgroup, Subgroup, Subgroup]
    sigma: tuple[Perm, Perm, Perm, Perm]
    K_generators: dict[str, list[Perm]]
    rings: dict[str, SRing]
    glued: dict[str, GluedProduct]
    group: AbelianGroup
    U: Subgroup
    L: Subgroup
    embed: list[int]
    project: list[int]
    checks: dict[str, Any] = field(default_factory=dict)

    @property
    def sring(self) -> SRing:
        return self.rings["A"]

    def to_json(self) -> dict:
        def sub(H: Subgroup) -> list[int]:
            return list(H.members)

        return {
            "G1": {"factors": list(self.G1.factors)},
            "G2": {"factors": list(self.G2.factors)},
            "factor_subgroups": [sub(H) for H in self.factor_subgroups],
            "chains": [{"A": sub(a), "B": sub(b)} for a, b in self.chains],
            "H": [{"factors": list(h.factors)} for h in self.H],
            "alignments": [sub(a) for a in self.alignments],
            "sigma": [list(s) for s in self.sigma],
            "K_generators": {k: [list(g) for g in v] for k, v in self.K_generators.items()},
            "rings": {k: r.to_json() for k, r in self.rings.items()},
            "glued": {
                k: {"U": sub(g.U), "L": sub(g.L), "embed": g.embed, "project": g.project}
                for k, g in self.glued.items()
            },
            "group": {"factors": list(self.group.factors)},
            "S": {"U": sub(self.U), "L": sub(self.L)},
            "embed": self.embed,
            "project": self.project,
            "checks": self.checks,
        }


def _glue(
    G1: AbelianGroup,
    H: AbelianGroup,
    emb1: np.ndarray,
    pr2: np.ndarray,
    A1: Subgroup,
    B1: Subgroup,
    left: SRing,
    right: SRing,
) -> GluedProduct:
    """``left`` over ``H1 x H`` glued with ``right`` over ``H2 x H`` into an S-ring over ``G1 x H``."""
    X = direct_product(G1, H)
    m = H.order
    H1_order = len(emb1)
    embed = [int(emb1[a]) * m + b for a in range(H1_order) for b in range(m)]
    project = [int(pr2[g]) * m + h for g in range(G1.order) for h in range(m)]
    U = Subgroup(X, tuple(sorted(embed)))
    L = Subgroup(X, tuple(a * m for a in A1.members))
    ring = wreath(X, U, L, left, right, embed=embed, project=project)
    return GluedProduct(X, U, L, embed, project, ring)


def _restrict_to_first(P: GluedProduct, n1: int) -> tuple[tuple[int, ...], ...]:
    """Classes of ``P.sring`` inside ``G1 x 1``, written in ``G1`` indices."""
    m = P.group.order // n1
    inside = set(range(0, P.group.order, m))
    return tuple(sorted(tuple(x // m for x in c) for c in P.sring.classes if set(c) <= inside))


def build_counterexample(G1: AbelianGroup, G2: AbelianGroup) -> CounterexampleWitness:
    """Assemble the glued S-ring and record every intermediate object."""
    for Gi in (G1, G2):
        if omega_star(Gi.order) < 2:
            raise HypothesisError(f"factor of order {Gi.order} needs at least two prime factors (not counting one 2)")
    S1, S2 = reduce_factor(G1), reduce_factor(G2)
    F1 = G1 if S1.order == G1.order else _group_of(S1)
    F2 = G2 if S2.order == G2.order else _group_of(S2)
    A1, B1 = choose_chain(F1)
    A2, B2 = choose_chain(F2)

    s1: Section = make_section(B1, trivial_subgroup(F1))
    s2: Section = make_section(whole_group(F1), A1)
    s3: Section = make_section(B2, trivial_subgroup(F2))
    s4: Section = make_section(whole_group(F2), A2)
    H1, H2, H3, H4 = s1.quotient, s2.quotient, s3.quotient, s4.quotient
    emb1, pr2, emb3, pr4 = s1.lift, s2.project, s3.lift, s4.project

    align = (
        _image_subgroup(H1, s1.project, A1.members),
        _image_subgroup(H2, pr2, B1.members),
        _image_subgroup(H3, s3.project, A2.members),
        _image_subgroup(H4, pr4, B2.members),
    )
    sig = tuple(build_sigma(h, a) for h, a in zip((H1, H2, H3, H4), align))
    s_1, s_2, s_3, s_4 = sig

    K = {
        "K1xK3": [_product_perm(s_1, _identity(H3.order)), _product_perm(_identity(H1.order), s_3)],
        "K23": [_product_perm(s_2, s_3)],
        "K14": [_product_perm(s_1, s_4)],
        "K24": [_product_perm(s_2, s_4)],
    }
    rings: dict[str, SRing] = {
        "A_1": cyclotomic(K["K1xK3"], direct_product(H1, H3)),
        "A_2": cyclotomic(K["K23"], direct_product(H2, H3)),
        "A_3": cyclotomic(K["K14"], direct_product(H1, H4)),
        "A_4": cyclotomic(K["K24"], direct_product(H2, H4)),
    }
    for name, (h, a) in zip(("H1", "H2", "H3", "H4"), zip((H1, H2, H3, H4), align)):
        if h.normal_form == (2, 2):
            proper = [c for c in cyclotomic([sig[int(name[1]) - 1]], h).classes if len(c) == 1 and c != (0,)]
            if [tuple(sorted((0,) + p)) for p in proper] != [a.members]:
                raise HypothesisError(f"involution on {name} is not aligned with its prescribed subgroup")

    g12 = _glue(F1, H3, emb1, pr2, A1, B1, rings["A_1"], rings["A_2"])
    g34 = _glue(F1, H4, emb1, pr2, A1, B1, rings["A_3"], rings["A_4"])
    rings["A_12"] = g12.sring
    rings["A_34"] = g34.sring
    left_g1 = _restrict_to_first(g12, F1.order)
    right_g1 = _restrict_to_first(g34, F1.order)
    if left_g1 != right_g1:
        raise GluingError("the two glued S-rings differ on G1", {"left": left_g1, "right": right_g1})

    G = direct_product(F1, F2)
    n2 = F2.order
    m3, m4 = H3.order, H4.order
    U = Subgroup(G, tuple(sorted(g * n2 + b for g in range(F1.order) for b in B2.members)))
    L = Subgroup(G, tuple(A2.members))
    embed = [g * n2 + int(emb3[h]) for g in range(F1.order) for h in range(m3)]
    project = [g * m4 + int(pr4[x]) for g in range(F1.order) for x in range(n2)]
    A = wreath(G, U, L, g12.sring, g34.sring, embed=embed, project=project)
    rings["A"] = A

    chain_ok = all(
        1 < a.order <= b.order < f.order and f.order // a.order >= 3 and b.order >= 3 and b.order // a.order <= 2
        for f, (a, b) in ((F1, (A1, B1)), (F2, (A2, B2)))
    )
    checks = {
        "chain_constraints": chain_ok,
        "H_shapes_legal": all(_is_small_legal(h) for h in (H1, H2, H3, H4)),
        "A_1_max_class_size": max(len(c) for c in rings["A_1"].classes),
        "A_1_has_class_of_size_4": any(len(c) == 4 for c in rings["A_1"].classes),
        "restrictions_to_G1_equal": left_g1 == right_g1,
        "proper_wreath": L.order > 1 and U.order < G.order and is_wreath_decomposition(A, U, L),
        "order": G.order,
        "rank": A.rank,
    }
    return CounterexampleWitness(
        G1=F1,
        G2=F2,
        factor_subgroups=(S1, S2),
        chains=((A1, B1), (A2, B2)),
        H=(H1, H2, H3, H4),
        alignments=align,
        sigma=sig,
        K_generators=K,
        rings=rings,
        glued={"A_12": g12, "A_34": g34},
        group=G,
        U=U,
        L=L,
        embed=embed,
        project=project,
        checks=checks,
    )


def counterexample_for(g1: int | list[int], g2: int | list[int]) -> CounterexampleWitness:
    """Convenience wrapper taking cyclic orders or factor lists."""
    f1 = [g1] if isinstance(g1, int) else list(g1)
    f2 = [g2] if isinstance(g2, int) else list(g2)
    return build_counterexample(make_group(f1), make_group(f2))
