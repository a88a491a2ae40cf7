"""Automorphism groups of S-rings, schurity and normality with checkable certificates.

``aut(A)`` is the group of permutations of ``G`` preserving the coloring
``c(x, y) = class of (y - x)``.  It contains all right translations, so it is
generated by them together with its stabilizer of 0, and only that stabilizer
is searched for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import config
from .errors import (
    CertificateError,
    DomainMismatchError,
    InconsistencyError,
    PreconditionError,
    ResourceError,
)
from .groups import AbelianGroup, is_automorphism, make_section, trivial_subgroup, translation, whole_group
from .perms import (
    PermGroup,
    conjugate,
    induced_section_action,
    labels_to_partition,
    right_translations,
    two_equivalent,
)
from .refine import Refiner, automorphism_generators, find_automorphism, separated_by_refinement
from .sring import SRing, is_wreath_decomposition, quotient_sring, verify_sring

Perm = tuple[int, ...]

KINDS = ("schurian", "non-schurian", "normal", "not-normal")


@dataclass
class Certificate:
    kind: str
    sring: SRing
    generators: list[Perm] = field(default_factory=list)
    witness: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "sring": self.sring.to_json(),
            "generators": [list(g) for g in self.generators],
            "witness": self.witness,
        }

    @classmethod
    def from_json(cls, data: dict) -> Certificate:
        from .groups import make_group

        kind = data["kind"]
        if kind not in KINDS:
            raise CertificateError(f"unknown certificate kind {kind!r}")
        G = make_group(data["sring"]["group"]["factors"])
        A = SRing(G, data["sring"]["classes"])
        gens = [tuple(int(x) for x in g) for g in data.get("generators", [])]
        return cls(kind, A, gens, dict(data.get("witness", {})))


def _check_bound(A: SRing) -> None:
    if A.group.order > config.AUT_BOUND:
        raise ResourceError(f"automorphism search is limited to {config.AUT_BOUND} points, got {A.group.order}")


def aut_stabilizer_generators(A: SRing) -> list[Perm]:
    """Generators of ``aut(A)_0``, memoized on ``A``."""
    got = A.cache.get("aut0")
    if got is None:
        _check_bound(A)
        C = A.color_matrix
        ref = Refiner(C)
        G = A.group
        for j in range(G.rank):
            if not ref.is_automorphism(translation(G, G.unit(j))):
                raise InconsistencyError("a right translation does not preserve the coloring")
        got = automorphism_generators(C, fixed=[0])
        A.cache["aut0"] = got
    return list(got)


def aut_stabilizer(A: SRing) -> PermGroup:
    return PermGroup(A.group.order, aut_stabilizer_generators(A), base=[0])


def aut(A: SRing) -> PermGroup:
    """``aut(A)``, generated by the unit translations and the stabilizer of 0."""
    G = A.group
    gens = [translation(G, G.unit(j)) for j in range(G.rank)]
    return PermGroup(G.order, gens + aut_stabilizer_generators(A))


def is_schurian(A: SRing) -> tuple[bool, Certificate]:
    """Whether the classes of ``A`` are the orbits of ``aut(A)_0``."""
    gens = aut_stabilizer_generators(A)
    n = A.group.order
    orbit_parts = labels_to_partition(PermGroup(n, gens).orbit_labels())
    if tuple(orbit_parts) == A.classes:
        return True, Certificate("schurian", A, gens, {"orbits_equal_classes": True})
    orbit_set = set(orbit_parts)
    for X in A.classes:
        if X in orbit_set:
            continue
        x = X[0]
        orbit = PermGroup(n, gens).orbit(x)
        if not set(orbit) <= set(X):
            raise InconsistencyError("an orbit of aut(A)_0 leaves its class")
        y = next(v for v in X if v not in set(orbit))
        method = "refinement" if separated_by_refinement(A.color_matrix, [0, x], [0, y]) else "search"
        witness = {"class": list(X), "x": x, "y": y, "orbit_of_x": orbit, "method": method}
        return False, Certificate("non-schurian", A, gens, witness)
    raise InconsistencyError("orbit partition differs from classes without a split class")


def _conjugate_translation_witness(G: AbelianGroup, f: Perm) -> dict | None:
    """A translation whose conjugate by ``f`` is not a translation, if any."""
    for j in range(G.rank):
        t = translation(G, G.unit(j))
        c = conjugate(t, f)
        if c != translation(G, c[0]):
            return {"generator": list(f), "translation_by": G.unit(j), "conjugate": list(c)}
    return None


def is_normal(A: SRing) -> tuple[bool, Certificate]:
    """Whether ``G_right`` is normal in ``aut(A)``; cross-checked with ``aut(A) <= hol(G)``."""
    G = A.group
    gens = aut_stabilizer_generators(A)
    witness = None
    for f in gens:
        witness = _conjugate_translation_witness(G, f)
        if witness is not None:
            break
    normal = witness is None
    # second route: every generator of aut(A)_0 must be a group automorphism
    in_holomorph = all(is_automorphism(G, f) for f in gens)
    if normal != in_holomorph:
        raise InconsistencyError("normality and holomorph containment disagree")
    if normal:
        return True, Certificate("normal", A, gens, {"stabilizer_in_aut_G": True})
    return False, Certificate("not-normal", A, gens, witness)


def in_M(A: SRing, Gamma: PermGroup) -> bool:
    """Whether ``Gamma`` contains ``G_right`` and is 2-equivalent to ``aut(A)``."""
    G = A.group
    if Gamma.degree != G.order:
        raise DomainMismatchError("group acts on a domain of the wrong size")
    if not right_translations(G).is_subgroup(Gamma):
        return False
    return two_equivalent(Gamma, aut(A))


def _induced_on_section(B: SRing, section) -> PermGroup:
    return induced_section_action(aut(B), section, B.group)


def wreath_schurity_sufficient(A: SRing, U, L) -> bool:
    """One-sided check that a wreath decomposition ``U/L`` of ``A`` is schurian.

    Uses ``aut(A_{G/L})`` and ``aut(A_U)`` as the candidate groups.  True
    implies ``A`` is schurian (re-checked with :func:`is_schurian`); False is
    inconclusive.
    """
    G = A.group
    if not is_wreath_decomposition(A, U, L):
        raise PreconditionError("U/L is not a wreath decomposition of the S-ring")
    top_section = make_section(whole_group(G), L)
    top = quotient_sring(A, top_section)
    low_section = make_section(U, trivial_subgroup(G))
    low = quotient_sring(A, low_section)
    if not (is_schurian(top)[0] and is_schurian(low)[0]):
        return False
    size = U.order // L.order
    if size <= 2:
        result = True
    else:
        # U/L inside G/L, and U/L inside U, identified through cosets in G
        Q0 = top.group
        s0 = make_section(
            _subgroup_of(Q0, {int(top_section.project[u]) for u in U.members}),
            trivial_subgroup(Q0),
        )
        Q1 = low.group
        s1 = make_section(
            whole_group(Q1),
            _subgroup_of(Q1, {int(low_section.project[l]) for l in L.members}),
        )
        d0 = _induced_on_section(top, s0)
        d1 = _induced_on_section(low, s1)
        # index of S in the first realization -> index in the second
        to1 = np.empty(s0.quotient.order, dtype=np.int64)
        for q in range(s0.quotient.order):
            g = int(top_section.lift[int(s0.lift[q])])
            to1[q] = s1.project[int(low_section.project[g])]
        back = np.argsort(to1)
        moved = [tuple(int(v) for v in to1[np.asarray(f)[back]]) for f in d0.generators]
        d0_moved = PermGroup(s1.quotient.order, moved)
        result = d0_moved.is_subgroup(d1) and d1.is_subgroup(d0_moved)
    if result and not is_schurian(A)[0]:
        raise InconsistencyError("wreath criterion succeeded on a non-schurian S-ring")
    return result


def _subgroup_of(G: AbelianGroup, members: set[int]):
    from .groups import Subgroup

    return Subgroup(G, tuple(sorted(members)))


def verify_certificate(cert: Certificate) -> bool:
    """Re-check a certificate from its generators and witness, without recomputing ``aut(A)``.

    Raises :class:`CertificateError` naming the first failed check.
    """
    A = cert.sring
    G = A.group
    verify_sring(G, A.classes)
    C = A.color_matrix
    ref = Refiner(C)
    for f in cert.generators:
        if len(f) != G.order or sorted(f) != list(range(G.order)):
            raise CertificateError("a generator is not a permutation of the group")
        if f[0] != 0:
            raise CertificateError("a generator does not fix 0")
        if not ref.is_automorphism(f):
            raise CertificateError("a generator does not preserve the coloring")
    if cert.kind == "schurian":
        orbits = labels_to_partition(PermGroup(G.order, cert.generators).orbit_labels())
        if tuple(orbits) != A.classes:
            raise CertificateError("generator orbits differ from the classes")
        return True
    if cert.kind == "non-schurian":
        w = cert.witness
        x, y = int(w["x"]), int(w["y"])
        if A.class_of[x] != A.class_of[y]:
            raise CertificateError("witness points lie in different classes")
        method = w.get("method")
        if method == "refinement":
            if not separated_by_refinement(C, [0, x], [0, y]):
                raise CertificateError("refinement does not separate the witness points")
        elif method == "search":
            if find_automorphism(C, [0, x], [0, y]) is not None:
                raise CertificateError("an automorphism maps x to y")
        else:
            raise CertificateError(f"unknown evidence method {method!r}")
        return True
    if cert.kind == "normal":
        for f in cert.generators:
            if not is_automorphism(G, f):
                raise CertificateError("a stabilizer generator is not a group automorphism")
        return True
    if cert.kind == "not-normal":
        f = tuple(cert.witness["generator"])
        if f[0] != 0 or not ref.is_automorphism(f):
            raise CertificateError("witness is not an automorphism of the S-ring fixing 0")
        if is_automorphism(G, f):
            raise CertificateError("witness is a group automorphism, so it normalizes G_right")
        return True
    raise CertificateError(f"unknown certificate kind {cert.kind!r}")
