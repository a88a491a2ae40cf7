"""Schur rings over finite abelian groups: construction, verification, enumeration and schurity."""

from .build import cyclotomic, group_ring, orbit_sring, rank_two, tensor, wreath
from .classify import abelian_schur_verdict, is_cyclic_schur_order, is_elementary_schur, omega_star
from .counterexample import build_counterexample, counterexample_for
from .enumeration import all_srings, brute_force_srings, iter_srings, lemma_suite
from .groups import AbelianGroup, Section, Subgroup, all_subgroups, make_group, make_section
from .perms import PermGroup
from .schurity import Certificate, aut, is_normal, is_schurian, verify_certificate
from .sring import SRing, closure, is_sring, quotient_sring, restrict, verify_sring

__all__ = [
    "AbelianGroup",
    "Certificate",
    "PermGroup",
    "SRing",
    "Section",
    "Subgroup",
    "abelian_schur_verdict",
    "all_srings",
    "all_subgroups",
    "aut",
    "brute_force_srings",
    "build_counterexample",
    "closure",
    "counterexample_for",
    "cyclotomic",
    "group_ring",
    "is_cyclic_schur_order",
    "is_elementary_schur",
    "is_normal",
    "is_schurian",
    "is_sring",
    "iter_srings",
    "lemma_suite",
    "make_group",
    "make_section",
    "omega_star",
    "orbit_sring",
    "quotient_sring",
    "rank_two",
    "restrict",
    "tensor",
    "verify_certificate",
    "verify_sring",
    "wreath",
]
