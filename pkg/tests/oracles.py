"""Slow reference implementations used to cross-check the library.

Nothing here uses the package's tables or search code: group elements are
plain coordinate tuples and every check is by exhaustion.
"""

from __future__ import annotations

import itertools
from collections import deque

PRIMES_200 = [p for p in range(2, 201) if all(p % d for d in range(2, int(p**0.5) + 1))]


def tuples(factors):
    return list(itertools.product(*(range(f) for f in factors)))


def add(factors, a, b):
    return tuple((x + y) % f for x, y, f in zip(a, b, factors))


def scale(factors, m, a):
    return tuple((m * x) % f for x, f in zip(a, factors))


def span(factors, gens):
    zero = tuple(0 for _ in factors)
    seen = {zero}
    todo = deque([zero])
    while todo:
        x = todo.popleft()
        for g in gens:
            y = add(factors, x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def subgroups_by_subsets(factors):
    """Every subset closed under addition (feasible up to order 12)."""
    elems = tuples(factors)
    zero = elems[0]
    rest = elems[1:]
    out = set()
    for mask in range(2 ** len(rest)):
        S = {zero} | {rest[i] for i in range(len(rest)) if mask >> i & 1}
        if all(add(factors, a, b) in S for a in S for b in S):
            out.add(frozenset(S))
    return out


def subgroups_by_generators(factors, max_gens):
    """Spans of every tuple of at most ``max_gens`` elements."""
    elems = tuples(factors)
    out = set()
    for k in range(max_gens + 1):
        for gens in itertools.combinations(elems, k):
            out.add(span(factors, gens))
    return out


def automorphism_count(factors):
    """Count images of the unit vectors that extend to bijective homomorphisms."""
    elems = tuples(factors)
    choices = []
    for f in factors:
        choices.append([e for e in elems if scale(factors, f, e) == elems[0]])
    count = 0
    for images in itertools.product(*choices):
        image_set = set()
        for x in elems:
            y = elems[0]
            for c, img in zip(x, images):
                y = add(factors, y, scale(factors, c, img))
            image_set.add(y)
        if len(image_set) == len(elems):
            count += 1
    return count


def permutation_group_elements(degree, gens):
    ident = tuple(range(degree))
    seen = {ident}
    todo = deque([ident])
    while todo:
        a = todo.popleft()
        for g in gens:
            b = tuple(g[a[x]] for x in range(degree))
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def cyclic_schur_orders(limit):
    """Orders up to ``limit`` of shape p^k, p q^k, 2 p q^k, p q r or 2 p q r.

    ``p, q, r`` are distinct primes and ``k >= 0``; the extra factor 2 may
    coincide with one of them.
    """
    out = {1}
    ps = PRIMES_200
    for p in ps:
        v = p
        while v <= limit:
            out.add(v)
            v *= p
    for p, q in itertools.permutations(ps, 2):
        qk = 1
        while p * qk <= limit:
            out.add(p * qk)
            if 2 * p * qk <= limit:
                out.add(2 * p * qk)
            qk *= q
    for p, q, r in itertools.combinations(ps, 3):
        if p * q * r <= limit:
            out.add(p * q * r)
            if 2 * p * q * r <= limit:
                out.add(2 * p * q * r)
    return {n for n in out if n <= limit}


def structure_constants_ok(factors, classes):
    """Direct check of the three axioms by counting pairs."""
    elems = tuples(factors)
    zero = elems[0]
    cls = [frozenset(elems[i] for i in X) for X in classes]
    if frozenset([zero]) not in cls:
        return False
    neg = {x: scale(factors, -1, x) for x in elems}
    for X in cls:
        if frozenset(neg[x] for x in X) not in cls:
            return False
    for X in cls:
        for Y in cls:
            for Z in cls:
                counts = {sum(1 for x in X for y in Y if add(factors, x, y) == z) for z in Z}
                if len(counts) > 1:
                    return False
    return True
