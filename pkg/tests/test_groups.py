import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import automorphism_count, subgroups_by_generators, subgroups_by_subsets
from srings.classify import groups_of_order
from srings.errors import InvalidFactorError, NestingError, NotABijectionError, UsageError
from srings.groups import (
    Decomposition,
    all_subgroups,
    automorphism_group,
    cyclic_subgroups,
    holomorph,
    is_automorphism,
    isomorphic,
    make_group,
    make_section,
    power_map,
    power_maps,
    primary_factors,
    projection,
    subgroup_generated,
    trivial_subgroup,
    whole_group,
)

small_factor_lists = st.lists(st.integers(min_value=2, max_value=6), min_size=0, max_size=3).filter(
    lambda fs: int(np.prod(fs)) <= 48
)


def test_make_group_examples():
    E4 = make_group([2, 2])
    assert E4.order == 4 and E4.element(0) == (0, 0)
    assert make_group([]).order == 1
    G = make_group([3, 9])
    assert G.order == 27 and G.normal_form == (3, 9)


def test_indexing_is_lexicographic():
    G = make_group([2, 3])
    assert [G.element(i) for i in range(6)] == list(itertools.product(range(2), range(3)))
    assert all(G.index(G.element(i)) == i for i in range(6))


def test_bad_factor():
    with pytest.raises(InvalidFactorError):
        make_group([0])


def test_subgroup_generated_examples():
    Z6 = make_group([6])
    assert subgroup_generated(Z6, [2]).members == (0, 2, 4)
    assert subgroup_generated(Z6, []).members == (0,)
    E9 = make_group([3, 3])
    assert subgroup_generated(E9, [E9.index((1, 0)), E9.index((0, 1))]).order == 9


def test_all_subgroups_examples():
    assert [H.members for H in all_subgroups(make_group([4]))] == [(0,), (0, 2), (0, 1, 2, 3)]
    assert len(all_subgroups(make_group([2, 2]))) == 5
    assert len(all_subgroups(make_group([2, 4]))) == 8


@pytest.mark.parametrize("n", range(1, 13))
def test_subgroups_match_subset_filter(n):
    for fs in groups_of_order(n):
        G = make_group(fs)
        ours = {frozenset(G.element(x) for x in H.members) for H in all_subgroups(G)}
        assert ours == subgroups_by_subsets(list(G.factors))


@pytest.mark.parametrize("n", range(13, 25))
def test_subgroups_match_generator_spans(n):
    for fs in groups_of_order(n):
        G = make_group(fs)
        ours = {frozenset(G.element(x) for x in H.members) for H in all_subgroups(G)}
        assert ours == subgroups_by_generators(list(G.factors), max(G.rank, 1))


def test_lagrange_and_closure():
    G = make_group([2, 2, 6])
    for H in all_subgroups(G):
        assert G.order % H.order == 0
        assert H.is_closed()


def test_section_examples():
    Z4 = make_group([4])
    S = make_section(whole_group(Z4), subgroup_generated(Z4, [2]))
    assert S.quotient.order == 2
    U = subgroup_generated(Z4, [2])
    assert make_section(U, U).quotient.order == 1
    G = make_group([3, 9])
    L = subgroup_generated(G, [G.index((0, 3))])
    S = make_section(whole_group(G), L)
    assert S.quotient.order == 9
    assert isomorphic(S.quotient, make_group([3, 3]))


def test_section_fibres_are_cosets():
    G = make_group([2, 6])
    for U in all_subgroups(G):
        for L in all_subgroups(G):
            if not L.member_set <= U.member_set:
                with pytest.raises(NestingError):
                    make_section(U, L)
                continue
            S = make_section(U, L)
            assert S.quotient.order * L.order == U.order
            for q in range(S.quotient.order):
                coset = set(S.coset(q))
                u = min(coset)
                assert coset == {int(G.add_table[u, l]) for l in L.members}
            # the projection is a homomorphism
            for a in U.members:
                for b in U.members:
                    s = int(G.add_table[a, b])
                    assert S.project[s] == S.quotient.add_table[S.project[a], S.project[b]]


def test_quotient_isomorphism_by_brute_force():
    # a bijection between the quotient and Z3 x Z3 preserving addition exists
    G = make_group([3, 9])
    S = make_section(whole_group(G), subgroup_generated(G, [G.index((0, 3))]))
    Q = S.quotient
    E9 = make_group([3, 3])
    found = False
    for a in range(9):
        for b in range(9):
            f = {}
            for i in range(3):
                for j in range(3):
                    f[E9.index((i, j))] = int(Q.add_table[Q.multiples(i)[a], Q.multiples(j)[b]])
            if len(set(f.values())) == 9:
                found = all(
                    f[int(E9.add_table[x, y])] == Q.add_table[f[x], f[y]] for x in range(9) for y in range(9)
                )
                if found:
                    break
        if found:
            break
    assert found


def test_automorphism_examples():
    assert automorphism_group(make_group([5])).order() == 4
    assert automorphism_group(make_group([2, 2])).order() == 6
    assert automorphism_group(make_group([3, 9])).order() == 108


@pytest.mark.parametrize("n", range(2, 17))
def test_automorphism_counts_match_oracle(n):
    for fs in groups_of_order(n):
        G = make_group(fs)
        assert automorphism_group(G).order() == automorphism_count(list(G.factors))


def test_automorphism_generators_are_automorphisms():
    G = make_group([2, 4, 3])
    for g in automorphism_group(G).generators:
        assert is_automorphism(G, g)


def test_power_map_examples():
    Z5 = make_group([5])
    assert power_map(Z5, 2) == (0, 2, 4, 1, 3)
    assert power_map(Z5, 1) == (0, 1, 2, 3, 4)
    Z6 = make_group([6])
    assert power_map(Z6, 5) == tuple(int(v) for v in Z6.neg)
    with pytest.raises(NotABijectionError):
        power_map(Z6, 2)


def test_power_maps_are_central_automorphisms():
    G = make_group([2, 6])
    K = list(automorphism_group(G).elements())
    for m in power_maps(G):
        assert is_automorphism(G, m)
        for f in K:
            assert tuple(f[m[x]] for x in range(G.order)) == tuple(m[f[x]] for x in range(G.order))


def test_holomorph_examples():
    assert holomorph(make_group([5])).order() == 20
    assert holomorph(make_group([2, 2])).order() == 24
    assert holomorph(make_group([7])).order() == 42


def test_projection_examples():
    G = make_group([2, 3])
    D = Decomposition(G, (0,))
    X = {G.index((1, 1)), G.index((1, 2))}
    assert projection(D, X, 1) == {G.index((1, 0))}
    assert projection(D, set(), 1) == frozenset()
    E4Z5 = make_group([2, 2, 5])
    D = Decomposition(E4Z5, (0, 1))
    coset = {int(E4Z5.add_table[h, 1]) for h in D.G1.members}
    assert projection(D, coset, 1) == D.G1.member_set
    with pytest.raises(UsageError):
        projection((0,), X)


def test_cyclic_subgroups_are_cyclic():
    G = make_group([2, 4])
    for H in cyclic_subgroups(G):
        assert any(subgroup_generated(G, [g]).members == H.members for g in H.members)


def test_primary_factors():
    assert primary_factors([2, 6]) == (2, 2, 3)
    assert primary_factors([12]) == (4, 3)


@settings(max_examples=40, deadline=None)
@given(small_factor_lists)
def test_group_table_laws(fs):
    G = make_group(fs)
    T = G.add_table
    n = G.order
    assert (T[0] == np.arange(n)).all()
    assert (T[np.arange(n), G.neg] == 0).all()
    assert (T == T.T).all()
    assert trivial_subgroup(G).order == 1


@settings(max_examples=25, deadline=None)
@given(small_factor_lists)
def test_normal_form_is_isomorphism_invariant(fs):
    G = make_group(fs)
    H = make_group(list(reversed(fs)))
    assert isomorphic(G, H)
    assert G.normal_form == make_group(primary_factors(fs)).normal_form
