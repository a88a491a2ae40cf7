import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import structure_constants_ok
from srings.build import cyclotomic, group_ring, rank_two
from srings.classify import groups_of_order
from srings.enumeration import brute_force_srings
from srings.errors import AxiomViolation, InconsistencyError, NotAnAGroupError, PartitionError, PreconditionError
from srings.groups import all_subgroups, automorphism_group, make_group, make_section, power_map, subgroup_generated, trivial_subgroup, whole_group
from srings.sring import (
    SRing,
    a_subgroups,
    cayley_isomorphisms,
    closure,
    coset_count_profile,
    find_violation,
    is_sring,
    quotient_sring,
    radical,
    restrict,
    verify_sring,
    wielandt_power,
    wreath_decompositions,
)

Z4_WREATH = [[0], [2], [1, 3]]


def z4_wreath():
    return verify_sring(make_group([4]), Z4_WREATH)


def test_group_ring_and_rank_two_are_valid():
    for fs in ([2, 2], [6], [3, 3]):
        G = make_group(fs)
        assert verify_sring(G, [[x] for x in range(G.order)]).rank == G.order
        assert verify_sring(G, [[0], list(range(1, G.order))]).rank == 2


def test_verify_examples():
    Z5 = make_group([5])
    assert verify_sring(Z5, [[0], [1, 4], [2, 3]]).rank == 3
    with pytest.raises(AxiomViolation) as err:
        verify_sring(Z5, [[0], [1, 2], [3, 4]])
    assert err.value.axiom == "S3"
    w = err.value.witness
    count = lambda z: sum(1 for x in w["X"] for y in w["Y"] if (x + y) % 5 == z)
    assert count(w["z"]) == w["count_z"] != w["count_z_prime"] == count(w["z_prime"])
    # {1,2} + {1,2} also hits the class {3, 4} unevenly
    assert w["X"] == w["Y"] == [1, 2] and count(3) == 2 and count(4) == 1


def test_s3_witness_is_genuine():
    assert is_sring(make_group([6]), [[0], [1, 5], [2, 4], [3]])
    G = make_group([7])
    classes = [[0], [1, 6], [2, 3, 4, 5]]
    v = find_violation(G, classes)
    assert v is not None and v.axiom == "S3"
    w = v.witness
    X, Y = set(w["X"]), set(w["Y"])
    count = lambda z: sum(1 for x in X for y in Y if (x + y) % 7 == z)
    assert count(w["z"]) == w["count_z"] != w["count_z_prime"] == count(w["z_prime"])


def test_axiom_order():
    G = make_group([4])
    assert find_violation(G, [[0, 1], [2], [3]]).axiom == "S1"
    assert find_violation(G, [[0], [1], [2, 3]]).axiom == "S2"


def test_partition_errors():
    G = make_group([4])
    with pytest.raises(PartitionError):
        verify_sring(G, [[0], [1, 2], [2, 3]])
    with pytest.raises(PartitionError):
        verify_sring(G, [[0], [1, 2]])


@pytest.mark.parametrize("fs", [[2], [3], [4], [2, 2], [5], [6]])
def test_validity_matches_direct_count(fs):
    G = make_group(fs)
    for A in brute_force_srings(G):
        assert structure_constants_ok(fs, A.classes)
    # a few non-rings
    classes = [[0]] + [[x] for x in range(1, G.order)]
    if G.order > 3:
        merged = [[0], [1, 2]] + [[x] for x in range(3, G.order)]
        assert is_sring(G, merged) == structure_constants_ok(fs, merged)
    assert is_sring(G, classes)


def test_classes_sorted_by_minimum():
    A = SRing(make_group([5]), [[3, 2], [0], [4, 1]])
    assert A.classes == ((0,), (1, 4), (2, 3))


def test_closure_examples():
    Z5 = make_group([5])
    assert closure(Z5, [[x] for x in range(5)]) == group_ring(Z5)
    assert closure(Z5, [[1, 4]]).classes == ((0,), (1, 4), (2, 3))
    G = make_group([2, 3])
    assert closure(G, [list(range(1, 6))]) == rank_two(G)


@pytest.mark.parametrize("n", range(2, 9))
def test_closure_is_coarsest_closed_refinement(n):
    rng = np.random.default_rng(n)
    for fs in groups_of_order(n):
        G = make_group(fs)
        rings = brute_force_srings(G)
        for _ in range(6):
            seed = [int(x) for x in np.flatnonzero(rng.integers(0, 2, size=G.order))]
            ok = [A for A in rings if all(set(X) <= set(seed) or not set(X) & set(seed) for X in A.classes)]
            coarsest = min(ok, key=lambda A: A.rank)
            assert closure(G, [seed]) == coarsest
            # every admissible ring refines the coarsest one
            for A in ok:
                assert all(len({coarsest.class_of[x] for x in X}) == 1 for X in A.classes)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([[6], [2, 4], [3, 3], [8], [2, 2, 2], [10]]), st.data())
def test_closure_idempotent_and_monotone(fs, data):
    G = make_group(fs)
    s1 = data.draw(st.sets(st.integers(0, G.order - 1)))
    s2 = data.draw(st.sets(st.integers(0, G.order - 1)))
    A = closure(G, [s1])
    assert closure(G, A.classes) == A
    B = closure(G, [s1, s2])
    # B refines A
    assert all(len({A.class_of[x] for x in X}) == 1 for X in B.classes)


def test_radical_examples():
    Z5 = make_group([5])
    assert radical(Z5, range(5)).order == 5
    G = make_group([2, 4])
    H = subgroup_generated(G, [G.index((0, 2)), G.index((1, 0))])
    assert radical(G, H.members).members == H.members
    assert radical(Z5, [1, 4]).order == 1


def test_a_subgroup_examples():
    G = make_group([2, 4])
    assert len(a_subgroups(group_ring(G))) == len(all_subgroups(G))
    assert [H.order for H in a_subgroups(rank_two(G))] == [1, 8]
    assert [H.members for H in a_subgroups(z4_wreath())] == [(0,), (0, 2), (0, 1, 2, 3)]


def test_a_subgroups_match_brute_force():
    for fs in ([2, 4], [2, 2, 2], [6]):
        G = make_group(fs)
        for A in brute_force_srings(G):
            expected = [H.members for H in all_subgroups(G) if A.is_a_set(H.members)]
            assert sorted(H.members for H in a_subgroups(A)) == sorted(expected)


def test_restrict_examples():
    A = z4_wreath()
    G = A.group
    assert restrict(A, whole_group(G)) == A
    assert restrict(A, trivial_subgroup(G)).rank == 1
    R = restrict(A, subgroup_generated(G, [2]))
    assert R.rank == 2 and R.group.order == 2
    with pytest.raises(NotAnAGroupError):
        restrict(rank_two(make_group([4])), subgroup_generated(G, [2]))


def test_quotient_examples():
    A = z4_wreath()
    G = A.group
    L = subgroup_generated(G, [2])
    assert quotient_sring(A, make_section(whole_group(G), trivial_subgroup(G))) == A
    assert quotient_sring(A, make_section(L, L)).rank == 1
    Q = quotient_sring(A, make_section(whole_group(G), L))
    assert Q.group.order == 2 and Q.rank == 2


def test_wielandt_power_examples():
    Z6 = make_group([6])
    A = group_ring(Z6)
    got = wielandt_power(A, [1], 2)
    assert got.elements == {2} and got.is_a_set
    B = rank_two(make_group([4]))
    got = wielandt_power(B, [1, 2, 3], 2)
    assert got.elements == {0} and got.is_a_set
    assert wielandt_power(A, [0], 3).elements == {0}
    with pytest.raises(PreconditionError):
        wielandt_power(A, [1], 5)


def test_coset_profile_examples():
    A = z4_wreath()
    G = A.group
    L = subgroup_generated(G, [2])
    assert coset_count_profile(A, L, [0]) == 1
    assert coset_count_profile(A, whole_group(G), [1, 3]) == 2
    assert coset_count_profile(A, L, [1, 3]) == 2
    with pytest.raises(InconsistencyError):
        coset_count_profile(group_ring(G), L, [0, 1, 3])


def test_cayley_isomorphism_examples():
    G = make_group([2, 2])
    assert len(cayley_isomorphisms(group_ring(G), group_ring(G))) == 6
    Z7 = make_group([7])
    C = cyclotomic([power_map(Z7, 6)], Z7)
    assert len(cayley_isomorphisms(C, C)) == 6
    assert cayley_isomorphisms(group_ring(Z7), rank_two(Z7)) == []


def test_cayley_isomorphisms_match_automorphism_filter():
    G = make_group([2, 4])
    auts = list(automorphism_group(G).elements())
    for A in brute_force_srings(G):
        for B in brute_force_srings(G):
            expected = {
                f for f in auts if {tuple(sorted(f[x] for x in X)) for X in A.classes} == set(B.classes)
            }
            assert set(cayley_isomorphisms(A, B)) == expected


def test_wreath_decomposition_examples():
    A = z4_wreath()
    decs = wreath_decompositions(A)
    assert any(d.U.order == 4 for d in decs) and any(d.L.order == 1 for d in decs)
    proper = [(d.U.members, d.L.members) for d in decs if d.proper]
    assert ((0, 2), (0, 2)) in proper
    G = make_group([2, 4])
    assert not [d for d in wreath_decompositions(group_ring(G)) if d.proper]


def test_to_json_shape():
    A = z4_wreath()
    assert A.to_json() == {"group": {"factors": [4]}, "classes": [[0], [1, 3], [2]]}
