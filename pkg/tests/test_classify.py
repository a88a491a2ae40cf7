import itertools

import pytest
import sympy

from oracles import cyclic_schur_orders
from srings.classify import (
    NON_SCHUR,
    OPEN,
    OUT_OF_SCOPE,
    SCHUR,
    SchurVerdict,
    abelian_schur_verdict,
    check_verdict_witness,
    cyclic_table,
    family_of,
    group_type,
    groups_of_order,
    is_cyclic_schur_order,
    is_elementary_schur,
    omega_splits,
    omega_star,
    subgroup_types,
    type_factors,
    verdict_for_factors,
)
from srings.errors import UsageError
from srings.groups import make_group

LIMIT = 100


def family_members(limit):
    """Factor lists of the nine families, built directly from their parameters."""
    odd = list(sympy.primerange(3, limit + 1))
    primes = list(sympy.primerange(2, limit + 1))
    out = []

    def powers(p):
        v = p
        while v <= limit:
            yield v
            v *= p

    for t in powers(2):
        out.append([2, t])
        for p in odd:
            out.append([2, p, t])
    for p in odd:
        for t in powers(p):
            out.append([2, 2, t])
        for q in primes:
            if q != p:
                out.append([2, 2, p * q])
        out.append([2, 2, 2, 2, p])
    for t in powers(3):
        out.append([3, t])
        out.append([6, t])
    # no p occurs in the E9 families, so q = 3 is allowed there
    for q in primes:
        out.append([3, 3, q])
        out.append([3, 3, 2 * q])
    # E9 x Z3 is elementary and handled by its own rule
    return [fs for fs in out if int(sympy.prod(fs)) <= limit and fs != [3, 3, 3]]


def test_omega_star_examples():
    assert omega_star(9) == 2
    assert omega_star(12) == 2
    assert omega_star(2) == 0
    assert omega_star(1) == 0
    with pytest.raises(UsageError):
        omega_star(0)


def test_cyclic_examples():
    assert is_cyclic_schur_order(45)
    assert is_cyclic_schur_order(105)
    assert not is_cyclic_schur_order(900)


def test_cyclic_orders_match_shape_enumeration():
    expected = cyclic_schur_orders(200)
    assert {n for n in range(1, 201) if is_cyclic_schur_order(n)} == expected
    table = cyclic_table(1, 200)
    assert [row["n"] for row in table if row["schur"]] == sorted(expected)


def test_elementary_examples():
    assert is_elementary_schur(2, 4)
    assert not is_elementary_schur(2, 6)
    assert is_elementary_schur(3, 3)
    assert not is_elementary_schur(3, 4)
    with pytest.raises(UsageError):
        is_elementary_schur(4, 2)
    with pytest.raises(UsageError):
        is_elementary_schur(2, 1)


def test_verdict_examples():
    v = verdict_for_factors([3, 9])
    assert v.detail["family"] == "Z3 x Z3^k"
    # order 27 is covered by the small-group catalog
    assert v.status == SCHUR and v.rule == "small-catalog"
    assert verdict_for_factors([3, 27]).status == OPEN
    v = verdict_for_factors([9, 9])
    assert v.status == NON_SCHUR and v.detail["split"] == [[9], [9]]
    v = verdict_for_factors([2, 2, 7])
    assert v.status == SCHUR and v.rule == "E4xZp-schur"


@pytest.mark.parametrize("fs", [[9, 9], [6, 6], [2, 2, 2, 2, 2, 2], [3, 3, 3, 3]])
def test_known_non_schur_groups_have_valid_witnesses(fs):
    v = verdict_for_factors(fs)
    assert v.status == NON_SCHUR
    assert check_verdict_witness(fs, v)


def test_forged_witnesses_are_rejected():
    fake = SchurVerdict(NON_SCHUR, "omega-star-split", {"split": [[3], [9]]})
    assert not check_verdict_witness([9, 9], fake)
    fake = SchurVerdict(NON_SCHUR, "elementary-orders", {})
    assert not check_verdict_witness([2, 2, 2, 2], fake)
    fake = SchurVerdict(NON_SCHUR, "made-up", {})
    assert not check_verdict_witness([9, 9], fake)


def test_family_members_up_to_100():
    members = family_members(LIMIT)
    assert len(members) > 30
    for fs in members:
        T = group_type(fs)
        assert family_of(T) is not None, fs
        v = abelian_schur_verdict(make_group(fs))
        assert v.status in (OPEN, SCHUR), (fs, v)


def test_groups_outside_the_families_are_not_schur():
    member_types = {tuple(type_factors(group_type(fs))) for fs in family_members(200)}
    for n in range(1, 201):
        for fs in groups_of_order(n):
            T = group_type(fs)
            v = abelian_schur_verdict(make_group(fs))
            assert v.status != OUT_OF_SCOPE
            assert check_verdict_witness(fs, v)
            cyclic = len(fs) <= 1
            elementary = len(set(fs)) == 1 and sympy.isprime(fs[0]) and len(fs) >= 2
            if not cyclic and not elementary and tuple(type_factors(T)) not in member_types:
                assert v.status == NON_SCHUR, fs


def test_odd_open_groups_have_the_expected_shape():
    for n in range(3, 1000, 2):
        for fs in groups_of_order(n):
            if len(fs) < 2:
                continue
            v = verdict_for_factors(fs)
            if v.status != OPEN:
                continue
            T = group_type(fs)
            threes = T.get(3, ())
            others = [p for p in T if p != 3]
            z3_z3k = not others and len(threes) == 2 and threes[1] == 1
            e9_zp = threes == (1, 1) and len(others) == 1 and T[others[0]] == (1,)
            assert z3_z3k or e9_zp, fs


def test_schur_verdicts_are_closed_under_subgroups():
    for n in range(1, 201):
        for fs in groups_of_order(n):
            if verdict_for_factors(fs).status != SCHUR:
                continue
            for S in subgroup_types(group_type(fs)):
                assert verdict_for_factors(type_factors(S)).status != NON_SCHUR, (fs, S)


def test_omega_splits_examples():
    G = make_group([9, 9])
    splits = omega_splits(G)
    assert splits and all(a.order == 9 and b.order == 9 for a, b in splits)
    for a, b in splits:
        assert a.member_set & b.member_set == {0}
    assert omega_splits(make_group([2, 2, 7])) == []
    assert omega_splits(make_group([2])) == []


def test_omega_splits_match_exhaustive_search():
    # every split of the primary cyclic factors, filtered by omega_star
    for fs in ([9, 9], [2, 2, 9], [3, 3, 5], [4, 12], [2, 2, 2, 3]):
        G = make_group(fs)
        cyc = []
        for f in fs:
            cyc += [p**e for p, e in sympy.factorint(f).items()]
        orders = set()
        for r in range(1, len(cyc)):
            for left in itertools.combinations(range(len(cyc)), r):
                a = int(sympy.prod(cyc[i] for i in left))
                b = G.order // a
                if omega_star(a) >= 2 and omega_star(b) >= 2:
                    orders.add(frozenset([a, b]))
        assert {frozenset([x.order, y.order]) for x, y in omega_splits(G)} == orders
