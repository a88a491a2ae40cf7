import functools

import pytest
import sympy

from srings.build import cyclotomic, group_ring
from srings.classify import groups_of_order
from srings.enumeration import (
    SearchStats,
    all_srings,
    brute_force_srings,
    canonical_form,
    canonical_key,
    count_srings,
    for_each_sring,
    fuse_up_to_automorphism,
    iter_srings,
    lemma_suite,
    prime_factor_decompositions,
    prime_factor_split,
    product_suite,
    factor_decompositions,
)
from srings.errors import ResourceError, UsageError
from srings.groups import Decomposition, all_subgroups, make_group, make_section, power_map, power_maps, primary_factors
from srings.schurity import is_schurian
from srings.sring import a_subgroups, coset_count_profile, quotient_sring, verify_sring, wielandt_power

# fused counts (one S-ring per Cayley isomorphism class) cross-checked against
# fusing the labeled enumeration, which in turn matches brute force up to order 8
FUSED_COUNTS = {
    (2,): 1,
    (4,): 3,
    (5,): 3,
    (2, 2): 3,
    (2, 4): 17,
    (2, 2, 2): 9,
    (7,): 4,
    (8,): 10,
    (2, 3): 7,
    (3, 3): 10,
    (2, 5): 10,
    (11,): 4,
    (2, 2, 3): 33,
    (13,): 6,
    (2, 7): 13,
    (3, 5): 21,
    (16,): 37,
    (2, 8): 110,
    (4, 4): 83,
    (17,): 5,
    (2, 9): 42,
    (2, 3, 3): 59,
    (19,): 6,
    (4, 5): 47,
    (2, 2, 5): 48,
    (2, 2, 4): 126,
}

LABELED_COUNTS = {
    (2, 2): 5,
    (2, 4): 28,
    (2, 2, 2): 100,
    (3, 3): 40,
    (2, 2, 3): 76,
    (2, 8): 163,
    (4, 4): 537,
    (2, 3, 3): 297,
    (2, 2, 5): 109,
}


def keys(rings):
    return {canonical_key(A) for A in rings}


def test_small_counts():
    assert count_srings(make_group([2])) == 1
    assert count_srings(make_group([4])) == 3
    assert count_srings(make_group([5])) == 3


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_prime_cyclic_rings_are_cyclotomic(p):
    G = make_group([p])
    rings = all_srings(G)
    assert len(rings) == sympy.divisor_count(p - 1)
    # one cyclotomic ring per subgroup of the multiplicative group
    g = sympy.primitive_root(p) if p > 2 else 1
    expected = set()
    for d in sympy.divisors(p - 1):
        expected.add(cyclotomic([power_map(G, pow(int(g), (p - 1) // d, p))], G).classes)
    assert {A.classes for A in rings} == expected


@pytest.mark.parametrize("n", range(1, 9))
def test_labeled_search_matches_brute_force(n):
    for fs in groups_of_order(n):
        G = make_group(fs)
        brute = {A.classes for A in brute_force_srings(G)}
        assert {A.classes for A in all_srings(G, fuse=False)} == brute
        assert keys(all_srings(G)) == keys(brute_force_srings(G))


@pytest.mark.parametrize("fs", sorted(FUSED_COUNTS, key=lambda f: (len(f), f)))
def test_frozen_fused_counts(fs):
    assert len(all_srings(make_group(list(fs)))) == FUSED_COUNTS[fs]


@pytest.mark.parametrize("fs", sorted(LABELED_COUNTS))
def test_labeled_counts_and_fusion(fs):
    G = make_group(list(fs))
    labeled = all_srings(G, fuse=False)
    assert len(labeled) == LABELED_COUNTS[fs]
    fused = all_srings(G)
    assert [A.classes for A in fuse_up_to_automorphism(labeled)] == [A.classes for A in fuse_up_to_automorphism(fused)]


def test_fused_representatives_are_distinct_and_canonical():
    G = make_group([2, 2, 3])
    rings = all_srings(G)
    assert len(keys(rings)) == len(rings)
    for A in rings:
        C = canonical_form(A)
        assert canonical_key(C) == canonical_key(A)
        verify_sring(G, C.classes)


def test_threads_and_callbacks_agree():
    G = make_group([2, 8])
    one = all_srings(G)
    assert [A.classes for A in all_srings(G, threads=3)] == [A.classes for A in one]
    seen = []
    assert for_each_sring(G, seen.append) == len(one)
    stats = SearchStats()
    assert sum(1 for _ in iter_srings(G, stats=stats)) == len(one)
    assert stats.leaves >= len(one)


def test_bound_is_enforced():
    with pytest.raises(ResourceError):
        all_srings(make_group([5, 5]))
    with pytest.raises(ResourceError):
        brute_force_srings(make_group([9]))


@functools.cache
def _rings_of(fs, fuse):
    return all_srings(make_group(list(fs)), fuse=fuse)


def _rings_up_to(n, labeled_limit=12):
    for m in range(1, n + 1):
        for fs in groups_of_order(m):
            rings = _rings_of(primary_factors(fs), m > labeled_limit)
            yield rings[0].group, rings


def test_power_maps_permute_classes():
    for G, rings in _rings_up_to(16):
        maps = power_maps(G)
        for A in rings:
            cls = set(A.classes)
            for m in maps:
                assert all(tuple(sorted(m[x] for x in X)) in cls for X in A.classes)


def test_wielandt_powers_are_a_sets():
    for G, rings in _rings_up_to(16):
        primes = sympy.primefactors(G.order)
        for A in rings:
            for X in A.classes:
                for p in primes:
                    assert wielandt_power(A, X, p).is_a_set


def test_coset_profiles_are_constant():
    for G, rings in _rings_up_to(12):
        for A in rings:
            for H in a_subgroups(A):
                for X in A.classes:
                    coset_count_profile(A, H, X)


def test_quotients_of_schurian_rings_are_schurian():
    for G, rings in _rings_up_to(12):
        for A in rings:
            if not is_schurian(A)[0]:
                continue
            groups = a_subgroups(A)
            for U in groups:
                for L in groups:
                    if L.member_set <= U.member_set:
                        assert is_schurian(quotient_sring(A, make_section(U, L)))[0]


def test_lemma_and_product_suites_hold_up_to_order_20():
    checked = 0
    for G, rings in _rings_up_to(20, labeled_limit=0):
        decs = prime_factor_decompositions(G)
        prods = factor_decompositions(G)
        for A in rings:
            for d in decs:
                report = lemma_suite(A, d)
                assert report.passed, report.to_json()
                checked += 1
            for d in prods:
                report = product_suite(A, d)
                assert report.passed, report.to_json()
    assert checked > 0


def test_lemma_suite_examples():
    Z6 = make_group([2, 3])
    d = Decomposition(Z6, (0,))
    for A in all_srings(Z6):
        assert lemma_suite(A, d).passed
    assert lemma_suite(group_ring(Z6), d).passed
    G = make_group([2, 4])
    with pytest.raises(UsageError):
        prime_factor_split(group_ring(G), Decomposition(G, (1,)))
    with pytest.raises(UsageError):
        lemma_suite(group_ring(Z6), Decomposition(make_group([3, 2]), (0,)))


def test_every_subgroup_is_an_a_group_of_the_group_ring():
    G = make_group([2, 2, 3])
    assert len(a_subgroups(group_ring(G))) == len(all_subgroups(G))
