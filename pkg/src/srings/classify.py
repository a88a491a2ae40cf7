"""Which finite abelian groups are known to be Schur, known not to be, or still open.

Groups are handled by isomorphism type: a map from each prime to the
descending partition of exponents of its Sylow subgroup.  ``Z3 x Z9`` has
type ``{3: (2, 1)}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from sympy import factorint, isprime

from .errors import UsageError
from .groups import AbelianGroup, Subgroup, make_group, primary_parts, subgroup_generated

GroupType = dict[int, tuple[int, ...]]

SCHUR = "schur_by_paper"
NON_SCHUR = "non_schur_by_paper"
OPEN = "candidate_open"
OUT_OF_SCOPE = "out_of_scope"

ELEMENTARY_SCHUR_ORDERS = frozenset({4, 8, 9, 16, 27, 32})

# groups of order at most 41 reported non-Schur by the published small S-ring catalog
CATALOG_NON_SCHUR: dict[str, GroupType] = {
    "Z4 x E4": {2: (2, 1, 1)},
    "Z4 x Z4": {2: (2, 2)},
    "E4 x E9": {2: (1, 1), 3: (1, 1)},
}
CATALOG_LIMIT = 41


def big_omega(n: int) -> int:
    return sum(factorint(n).values())


def omega_star(n: int) -> int:
    """Number of prime factors of ``n`` with multiplicity, after removing one factor 2 from even ``n``."""
    if n < 1:
        raise UsageError("omega_star needs a positive integer")
    return big_omega(n // 2 if n % 2 == 0 else n)


def _pq_power(m: int) -> bool:
    """``m = p * q**k`` with distinct primes ``p, q`` and ``k >= 0``."""
    f = factorint(m)
    if len(f) == 1:
        return list(f.values()) == [1]
    return len(f) == 2 and 1 in f.values()


def _three_distinct(m: int) -> bool:
    f = factorint(m)
    return len(f) == 3 and set(f.values()) == {1}


def is_cyclic_schur_order(n: int) -> bool:
    """``n`` has one of the shapes ``p^k, pq^k, 2pq^k, pqr, 2pqr`` (``p, q, r`` distinct primes, ``k >= 0``).

    The prefactor 2 is not required to differ from ``p, q, r``.
    """
    if n < 1:
        raise UsageError("order must be positive")
    if len(factorint(n)) <= 1:
        return True
    if _pq_power(n) or _three_distinct(n):
        return True
    return n % 2 == 0 and (_pq_power(n // 2) or _three_distinct(n // 2))


def is_elementary_schur(p: int, k: int) -> bool:
    """Whether the elementary abelian group of order ``p^k`` (``k >= 2``) is Schur."""
    if not isprime(p):
        raise UsageError(f"{p} is not prime")
    if k < 2:
        raise UsageError("elementary groups of rank below 2 are cyclic")
    return p**k in ELEMENTARY_SCHUR_ORDERS


# isomorphism types


def group_type(G: AbelianGroup | tuple[int, ...] | list[int]) -> GroupType:
    factors = G.factors if isinstance(G, AbelianGroup) else G
    return {p: tuple(es) for p, es in primary_parts(factors).items()}


def type_order(T: GroupType) -> int:
    out = 1
    for p, es in T.items():
        out *= p ** sum(es)
    return out


def type_factors(T: GroupType) -> list[int]:
    """Invariant factors (ascending) of a type."""
    t = max((len(es) for es in T.values()), default=0)
    out = []
    for j in range(t):
        d = 1
        for p, es in T.items():
            if j < len(es):
                d *= p ** es[j]
        out.append(d)
    return out[::-1]


def type_name(T: GroupType) -> str:
    parts = []
    for p, es in sorted(T.items()):
        for e in es:
            parts.append(f"Z{p ** e}")
    return " x ".join(parts) if parts else "1"


def _normal(T: GroupType) -> tuple:
    return tuple(sorted((p, tuple(es)) for p, es in T.items() if es))


def is_cyclic_type(T: GroupType) -> bool:
    return all(len(es) <= 1 for es in T.values())


def elementary_of(T: GroupType) -> tuple[int, int] | None:
    """``(p, k)`` when the type is elementary abelian of rank ``k >= 2``."""
    if len(T) == 1:
        (p, es), = T.items()
        if len(es) >= 2 and set(es) == {1}:
            return p, len(es)
    return None


def _sub_partitions(es: tuple[int, ...]):
    """Partitions dominated part by part by ``es`` (both descending)."""
    def rec(i: int, bound: int):
        if i == len(es):
            yield ()
            return
        for v in range(min(bound, es[i]), -1, -1):
            if v == 0:
                yield ()
                continue
            for rest in rec(i + 1, v):
                yield (v,) + rest

    yield from rec(0, max(es) if es else 0)


def subgroup_types(T: GroupType) -> list[GroupType]:
    """Isomorphism types of all subgroups, largest order first."""
    primes = sorted(T)
    choices = [list(_sub_partitions(T[p])) for p in primes]
    out = []
    for combo in itertools.product(*choices):
        out.append({p: es for p, es in zip(primes, combo) if es})
    out.sort(key=lambda S: (-type_order(S), _normal(S)))
    return out


def is_subtype(S: GroupType, T: GroupType) -> bool:
    for p, es in S.items():
        big = T.get(p, ())
        if len(es) > len(big) or any(a > b for a, b in zip(es, big)):
            return False
    return True


def primary_cyclic_factors(T: GroupType) -> list[tuple[int, int]]:
    return [(p, e) for p in sorted(T) for e in T[p]]


def _type_from_cyclics(cyclics) -> GroupType:
    out: dict[int, list[int]] = {}
    for p, e in cyclics:
        out.setdefault(p, []).append(e)
    return {p: tuple(sorted(es, reverse=True)) for p, es in out.items()}


def omega_split_types(T: GroupType) -> list[tuple[GroupType, GroupType]]:
    """Direct splittings (up to swap and isomorphism) with both parts of ``omega_star >= 2``."""
    cyc = primary_cyclic_factors(T)
    seen = set()
    out = []
    for mask in range(1, 2 ** len(cyc) - 1):
        left = [c for i, c in enumerate(cyc) if mask >> i & 1]
        right = [c for i, c in enumerate(cyc) if not mask >> i & 1]
        a, b = _type_from_cyclics(left), _type_from_cyclics(right)
        if omega_star(type_order(a)) < 2 or omega_star(type_order(b)) < 2:
            continue
        key = frozenset([_normal(a), _normal(b)]) if _normal(a) != _normal(b) else (_normal(a),)
        if key in seen:
            continue
        seen.add(key)
        out.append((a, b))
    return out


def omega_splits(G: AbelianGroup) -> list[tuple[Subgroup, Subgroup]]:
    """Internal splittings ``G = G1 x G2`` (one per isomorphism-type pair) with ``omega_star(|Gi|) >= 2``."""
    gens: list[tuple[int, int, int]] = []  # (prime, exponent, element)
    for j, n in enumerate(G.factors):
        for p, e in factorint(n).items():
            x = G.multiple(n // p**e, G.unit(j))
            gens.append((p, e, x))
    seen = set()
    out = []
    for mask in range(1, 2 ** len(gens) - 1):
        left = [g for i, g in enumerate(gens) if mask >> i & 1]
        right = [g for i, g in enumerate(gens) if not mask >> i & 1]
        a = _type_from_cyclics([(p, e) for p, e, _ in left])
        b = _type_from_cyclics([(p, e) for p, e, _ in right])
        if omega_star(type_order(a)) < 2 or omega_star(type_order(b)) < 2:
            continue
        key = frozenset([_normal(a), _normal(b)])
        if key in seen:
            continue
        seen.add(key)
        out.append((subgroup_generated(G, [x for *_, x in left]), subgroup_generated(G, [x for *_, x in right])))
    return out


# the nine families


def family_of(T: GroupType) -> str | None:
    """Name of the family containing a group that is neither cyclic nor elementary, or None."""
    odd = {p: es for p, es in T.items() if p != 2}
    two = T.get(2, ())
    three = T.get(3, ())

    def only(primes) -> bool:
        return set(T) <= set(primes)

    # Z2 x Z_{2^k}
    if only([2]) and len(two) == 2 and two[1] == 1:
        return "Z2 x Z2^k"
    # E4 x Z_p also lies in the next family; report it here
    if two == (1, 1):
        # E4 x Z_{p^k}, p odd
        if len(odd) == 1 and len(list(odd.values())[0]) == 1:
            return "E4 x Zp^k"
        # E4 x Z_{pq} with p, q distinct odd primes
        if len(odd) == 2 and all(es == (1,) for es in odd.values()):
            return "E4 x Zpq"
    # Z_{2p} x Z_{2^k}, p odd
    if len(two) == 2 and two[1] == 1 and len(odd) == 1 and list(odd.values())[0] == (1,):
        return "Z2p x Z2^k"
    # E4 x Z_{2p} = E8 x Z_p
    if two == (1, 1, 1) and len(odd) == 1 and list(odd.values())[0] == (1,):
        return "E4 x Zpq"
    if two == (1, 1, 1, 1) and len(odd) == 1 and list(odd.values())[0] == (1,):
        return "E16 x Zp"
    others = {p: es for p, es in T.items() if p not in (2, 3)}
    if len(three) == 2 and three[1] == 1:
        if only([3]):
            return "Z3 x Z3^k"
        if two == (1,) and only([2, 3]):
            return "Z6 x Z3^k"
    if three == (1, 1):
        # E9 x Zq, q != 3
        if not two and len(others) == 1 and list(others.values())[0] == (1,):
            return "E9 x Zq"
        if two == (1,) and not others:
            return "E9 x Zq"
        # E9 x Z_{2q}
        if two == (1,) and len(others) == 1 and list(others.values())[0] == (1,):
            return "E9 x Z2q"
        if two == (2,) and not others:
            return "E9 x Z2q"
    # E9 x Z6 = E27 x Z2
    if three == (1, 1, 1) and two == (1,) and not others:
        return "E9 x Z2q"
    return None


def is_e4_times_prime(T: GroupType) -> bool:
    odd = [p for p in T if p != 2]
    return T.get(2) == (1, 1) and len(odd) == 1 and T[odd[0]] == (1,)


@dataclass
class SchurVerdict:
    status: str
    rule: str
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"status": self.status, "rule": self.rule, "detail": self.detail}


def _non_schur_reason(S: GroupType) -> tuple[str, dict] | None:
    """A published reason why a group of type ``S`` is not Schur, if one applies."""
    n = type_order(S)
    if is_cyclic_type(S):
        if not is_cyclic_schur_order(n):
            return "cyclic-order-not-schur", {"order": n}
        return None
    el = elementary_of(S)
    if el is not None:
        p, k = el
        if not is_elementary_schur(p, k):
            return "elementary-order-not-schur", {"prime": p, "rank": k}
        return None
    for name, C in CATALOG_NON_SCHUR.items():
        if _normal(C) == _normal(S):
            return "small-catalog-non-schur", {"catalog_group": name}
    splits = omega_split_types(S)
    if splits:
        a, b = splits[0]
        return "omega-star-split", {
            "split": [type_factors(a), type_factors(b)],
            "omega_star": [omega_star(type_order(a)), omega_star(type_order(b))],
        }
    return None


def abelian_schur_verdict(G: AbelianGroup | list[int]) -> SchurVerdict:
    """What the published results say about whether ``G`` is a Schur group."""
    T = group_type(G)
    n = type_order(T)
    name = type_name(T)
    base = {"group": type_factors(T), "type": name}
    if is_cyclic_type(T):
        ok = is_cyclic_schur_order(n)
        return SchurVerdict(SCHUR if ok else NON_SCHUR, "cyclic-orders", {**base, "order": n})
    el = elementary_of(T)
    if el is not None:
        p, k = el
        ok = is_elementary_schur(p, k)
        return SchurVerdict(SCHUR if ok else NON_SCHUR, "elementary-orders", {**base, "prime": p, "rank": k})
    for S in subgroup_types(T):
        found = _non_schur_reason(S)
        if found is None:
            continue
        rule, info = found
        detail = {**base, **info}
        if _normal(S) != _normal(T):
            detail["subgroup"] = type_factors(S)
            rule = f"subgroup:{rule}"
        return SchurVerdict(NON_SCHUR, rule, detail)
    fam = family_of(T)
    if fam is not None:
        if is_e4_times_prime(T):
            return SchurVerdict(SCHUR, "E4xZp-schur", {**base, "family": fam})
        if n <= CATALOG_LIMIT:
            return SchurVerdict(SCHUR, "small-catalog", {**base, "family": fam})
        return SchurVerdict(OPEN, "family", {**base, "family": fam})
    return SchurVerdict(OUT_OF_SCOPE, "no-rule", base)


def check_verdict_witness(G: AbelianGroup | list[int], verdict: SchurVerdict) -> bool:
    """Independently confirm the reason attached to a non-Schur verdict."""
    if verdict.status != NON_SCHUR:
        return True
    T = group_type(G)
    d = verdict.detail
    S = group_type(d["subgroup"]) if "subgroup" in d else T
    if not is_subtype(S, T):
        return False
    rule = verdict.rule.removeprefix("subgroup:")
    if rule in ("cyclic-orders", "cyclic-order-not-schur"):
        return is_cyclic_type(S) and not is_cyclic_schur_order(type_order(S))
    if rule in ("elementary-orders", "elementary-order-not-schur"):
        el = elementary_of(S)
        return el is not None and not is_elementary_schur(*el)
    if rule == "small-catalog-non-schur":
        return any(_normal(C) == _normal(S) for C in CATALOG_NON_SCHUR.values())
    if rule == "omega-star-split":
        a, b = (group_type(f) for f in d["split"])
        merged = sorted(primary_cyclic_factors(a) + primary_cyclic_factors(b))
        return merged == sorted(primary_cyclic_factors(S)) and min(
            omega_star(type_order(a)), omega_star(type_order(b))
        ) >= 2
    return False


def groups_of_order(n: int) -> list[list[int]]:
    """Invariant factor lists of every abelian group of order ``n``."""
    f = factorint(n)
    per_prime = []
    for p, e in sorted(f.items()):
        per_prime.append([(p, part) for part in _partitions(e)])
    out = []
    for combo in itertools.product(*per_prime):
        T = {p: part for p, part in combo}
        out.append(type_factors(T))
    return out if n > 1 else [[]]


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def cyclic_table(lo: int, hi: int) -> list[dict]:
    return [{"n": n, "schur": is_cyclic_schur_order(n)} for n in range(lo, hi + 1)]


def verdict_for_factors(factors: list[int]) -> SchurVerdict:
    return abelian_schur_verdict(make_group(factors))
