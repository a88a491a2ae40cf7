"""Finite abelian groups as explicit products of cyclic factors.

Elements are integer indices.  For factors ``(n_1, ..., n_k)`` the tuple
``(x_1, ..., x_k)`` with ``0 <= x_i < n_i`` gets the index
``sum(x_i * w_i)`` where ``w_k = 1`` and ``w_i = n_{i+1} * w_{i+1}``, so
indices follow the lexicographic order of tuples and index 0 is the identity.
The group operation is written additively throughout.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import config
from .errors import (
    InvalidFactorError,
    NestingError,
    NotABijectionError,
    ResourceError,
    UsageError,
)

Perm = tuple[int, ...]


class AbelianGroup:
    """The group Z_{n_1} x ... x Z_{n_k} with lexicographic element indexing."""

    def __init__(self, factors: Iterable[int]):
        factors = tuple(int(f) for f in factors)
        for f in factors:
            if f < 2:
                raise InvalidFactorError(f"cyclic factor orders must be >= 2, got {f}")
        self.factors = factors
        self.order = math.prod(factors)
        weights = []
        w = 1
        for f in reversed(factors):
            weights.append(w)
            w *= f
        self.weights = tuple(reversed(weights))

    def __repr__(self) -> str:
        return f"AbelianGroup({list(self.factors)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AbelianGroup) and other.factors == self.factors

    def __hash__(self) -> int:
        return hash(("AbelianGroup", self.factors))

    def __len__(self) -> int:
        return self.order

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.factors) if self.factors else 1

    # element conversion

    def element(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.order:
            raise IndexError(f"element index {index} out of range")
        return tuple(int(c) for c in self.coords[index])

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.factors):
            raise ValueError("coordinate tuple has the wrong length")
        return sum((int(c) % f) * w for c, f, w in zip(coords, self.factors, self.weights))

    @cached_property
    def coords(self) -> np.ndarray:
        """``coords[i]`` is the coordinate tuple of element ``i``."""
        out = np.zeros((self.order, len(self.factors)), dtype=np.int64)
        idx = np.arange(self.order)
        for j, (f, w) in enumerate(zip(self.factors, self.weights)):
            out[:, j] = (idx // w) % f
        return out

    def indices_of(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised inverse of :attr:`coords` (coordinates reduced first)."""
        coords = np.asarray(coords, dtype=np.int64)
        if not self.factors:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        f = np.array(self.factors, dtype=np.int64)
        w = np.array(self.weights, dtype=np.int64)
        return ((coords % f) * w).sum(axis=-1)

    # arithmetic

    def _check_table(self) -> None:
        if self.order > config.TABLE_BOUND:
            raise ResourceError(
                f"operation tables are not materialised for order {self.order} > {config.TABLE_BOUND}"
            )

    @cached_property
    def add_table(self) -> np.ndarray:
        self._check_table()
        c = self.coords
        table = np.zeros((self.order, self.order), dtype=np.int64)
        for j, (f, w) in enumerate(zip(self.factors, self.weights)):
            table += ((c[:, j][:, None] + c[:, j][None, :]) % f) * w
        return table

    @cached_property
    def neg(self) -> np.ndarray:
        return self.indices_of(-self.coords)

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[z, x]`` is the index of ``z - x``."""
        return self.add_table[:, self.neg]

    @cached_property
    def element_orders(self) -> np.ndarray:
        out = np.ones(self.order, dtype=np.int64)
        for j, f in enumerate(self.factors):
            col = f // np.gcd(self.coords[:, j], f)
            out = np.lcm(out, col)
        return out

    def add(self, a: int, b: int) -> int:
        return self.index(tuple(x + y for x, y in zip(self.element(a), self.element(b))))

    def negate(self, a: int) -> int:
        return int(self.neg[a])

    def multiple(self, m: int, a: int) -> int:
        return self.index(tuple(m * x for x in self.element(a)))

    def multiples(self, m: int) -> np.ndarray:
        """Index array of ``x -> m*x``."""
        return self.indices_of(m * self.coords)

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    def unit(self, j: int) -> int:
        """Index of the generator of the ``j``-th cyclic factor."""
        return self.weights[j]

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def normal_form(self) -> tuple[int, ...]:
        """Invariant factors ``d_1 | d_2 | ... | d_t``."""
        return invariant_factors(self.factors)


def make_group(factors: Iterable[int]) -> AbelianGroup:
    return AbelianGroup(factors)


def cyclic(n: int) -> AbelianGroup:
    return AbelianGroup([n] if n > 1 else [])


def elementary(p: int, k: int) -> AbelianGroup:
    return AbelianGroup([p] * k)


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def primary_parts(factors: Iterable[int]) -> dict[int, list[int]]:
    """Map each prime to the descending exponent partition of its Sylow part."""
    parts: dict[int, list[int]] = {}
    for f in factors:
        for p, e in _prime_factors(f).items():
            parts.setdefault(p, []).append(e)
    return {p: sorted(es, reverse=True) for p, es in sorted(parts.items())}


def primary_factors(factors: Iterable[int]) -> tuple[int, ...]:
    """Prime-power cyclic factors, grouped by prime and ascending within each prime."""
    return tuple(p**e for p, es in primary_parts(factors).items() for e in sorted(es))


def invariant_factors(factors: Iterable[int]) -> tuple[int, ...]:
    parts = primary_parts(factors)
    t = max((len(v) for v in parts.values()), default=0)
    out = []
    for j in range(t):
        d = 1
        for p, es in parts.items():
            if j < len(es):
                d *= p ** es[j]
        out.append(d)
    return tuple(reversed(out))


def normalize(G: AbelianGroup) -> AbelianGroup:
    return AbelianGroup(G.normal_form)


def isomorphic(G: AbelianGroup, H: AbelianGroup) -> bool:
    return G.normal_form == H.normal_form


# subgroups


@dataclass(frozen=True)
class Subgroup:
    owner: AbelianGroup
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(sorted(int(x) for x in self.members)))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, members={list(self.members)})"

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x: object) -> bool:
        return x in self.member_set

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.owner.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def issubset(self, other: Subgroup) -> bool:
        return self.member_set <= other.member_set

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A minimal generating sequence (an invariant-factor basis)."""
        trivial = trivial_subgroup(self.owner)
        section = make_section(self, trivial)
        return tuple(int(section.lift[section.quotient.unit(j)]) for j in range(section.quotient.rank))

    def is_closed(self) -> bool:
        G = self.owner
        m = np.asarray(self.members)
        if 0 not in self.member_set:
            return False
        if not self.mask[G.neg[m]].all():
            return False
        return bool(self.mask[G.add_table[np.ix_(m, m)]].all())


def trivial_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, (0,))


def whole_group(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def _sumset(G: AbelianGroup, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.unique(G.add_table[np.ix_(A, B)])


def subgroup_generated(G: AbelianGroup, X: Iterable[int]) -> Subgroup:
    """The smallest subgroup containing ``X``."""
    span = np.array([0], dtype=np.int64)
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for x in X:
        x = int(x)
        if not 0 <= x < G.order:
            raise IndexError(f"element index {x} out of range")
        if mask[x]:
            continue
        k = G.element_order(x)
        cyc = G.indices_of(np.outer(np.arange(k), G.coords[x]))
        span = _sumset(G, span, cyc)
        mask[span] = True
    return Subgroup(G, tuple(int(s) for s in span))


def subgroup_from_members(G: AbelianGroup, members: Iterable[int]) -> Subgroup:
    """Wrap an explicit member set, checking that it is a subgroup."""
    H = Subgroup(G, tuple(members))
    if len(set(H.members)) != len(H.members) or not H.is_closed():
        raise ValueError("member set is not a subgroup")
    return H


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    G = A.owner
    return Subgroup(G, tuple(int(s) for s in _sumset(G, np.asarray(A.members), np.asarray(B.members))))


def meet(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.owner, tuple(sorted(A.member_set & B.member_set)))


def cyclic_subgroups(G: AbelianGroup) -> list[Subgroup]:
    seen: dict[tuple[int, ...], Subgroup] = {}
    for g in range(G.order):
        H = subgroup_generated(G, [g])
        seen.setdefault(H.members, H)
    return sorted(seen.values(), key=lambda H: (H.order, H.members))


def all_subgroups(G: AbelianGroup, bound: int | None = None) -> list[Subgroup]:
    """Every subgroup once, sorted by ``(order, members)``.

    Computed as the closure of the cyclic subgroups under joins.
    """
    bound = config.GROUP_BOUND if bound is None else bound
    if G.order > bound:
        raise ResourceError(f"group order {G.order} exceeds subgroup bound {bound}")
    cyclics = cyclic_subgroups(G)
    found = {H.members: H for H in cyclics}
    frontier = list(cyclics)
    while frontier:
        new = []
        for A in frontier:
            for C in cyclics:
                if C.member_set <= A.member_set:
                    continue
                J = join(A, C)
                if J.members not in found:
                    found[J.members] = J
                    new.append(J)
        frontier = new
    out = sorted(found.values(), key=lambda H: (H.order, H.members))
    if len({H.members for H in out}) != len(out):
        raise AssertionError("duplicate subgroups")
    return out


# quotients and sections


def _abelian_basis(m: int, cadd: np.ndarray) -> tuple[list[int], list[int]]:
    """Invariant factors (ascending) and matching generators of an abstract group.

    ``cadd`` is the ``m x m`` addition table with identity 0.
    """
    if m == 1:
        return [], []
    orders = np.ones(m, dtype=np.int64)
    for x in range(1, m):
        y, k = x, 1
        while y != 0:
            y = int(cadd[y, x])
            k += 1
        orders[x] = k

    def span_with(span: set[int], g: int) -> set[int]:
        out = set(span)
        frontier = list(span)
        while frontier:
            nxt = []
            for s in frontier:
                t = int(cadd[s, g])
                if t not in out:
                    out.add(t)
                    nxt.append(t)
            frontier = nxt
        return out

    primary: dict[int, list[tuple[int, int]]] = {}
    for p, _ in _prime_factors(m).items():
        pmask = [x for x in range(m) if _is_power_of(int(orders[x]), p)]
        counts = []
        j = 0
        while True:
            c = sum(1 for x in pmask if (p**j) % int(orders[x]) == 0)
            counts.append(c)
            if c == len(pmask):
                break
            j += 1
        logs = [round(math.log(c, p)) for c in counts]
        # number of parts >= j is logs[j] - logs[j-1]
        at_least = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        lam = []
        for j in range(len(at_least), 0, -1):
            lam += [j] * (at_least[j - 1] - (at_least[j] if j < len(at_least) else 0))
        lam.sort(reverse=True)

        def search(i: int, span: set[int], chosen: list[int]) -> list[int] | None:
            if i == len(lam):
                return chosen
            want = p ** lam[i]
            for x in pmask:
                if orders[x] != want or x in span:
                    continue
                new = span_with(span, x)
                if len(new) == len(span) * want:
                    got = search(i + 1, new, chosen + [x])
                    if got is not None:
                        return got
            return None

        gens = search(0, {0}, [])
        assert gens is not None
        primary[p] = list(zip(lam, gens))

    t = max(len(v) for v in primary.values())
    factors, gens = [], []
    for j in range(t):
        d, g = 1, 0
        for p, parts in primary.items():
            if j < len(parts):
                e, x = parts[j]
                d *= p**e
                g = int(cadd[g, x])
        factors.append(d)
        gens.append(g)
    return factors[::-1], gens[::-1]


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


@dataclass(frozen=True)
class Section:
    """A section ``U/L`` with its quotient realised as an :class:`AbelianGroup`.

    ``project[x]`` is the quotient index of ``x`` for ``x`` in ``U`` and -1
    elsewhere; ``lift[q]`` is the smallest member of the coset ``q``.
    """

    U: Subgroup
    L: Subgroup
    quotient: AbelianGroup
    project: np.ndarray = field(repr=False, compare=False)
    lift: np.ndarray = field(repr=False, compare=False)

    @property
    def owner(self) -> AbelianGroup:
        return self.U.owner

    def coset(self, q: int) -> list[int]:
        return [int(x) for x in np.flatnonzero(self.project == q)]

    def image(self, X: Iterable[int]) -> frozenset[int]:
        out = set()
        for x in X:
            q = int(self.project[x])
            if q < 0:
                raise ValueError(f"element {x} is outside the section")
            out.add(q)
        return frozenset(out)

    def preimage(self, Y: Iterable[int]) -> frozenset[int]:
        Y = set(Y)
        return frozenset(int(x) for x in np.flatnonzero(np.isin(self.project, list(Y))))


def make_section(U: Subgroup, L: Subgroup) -> Section:
    if U.owner != L.owner:
        raise NestingError("U and L live in different groups")
    if not L.member_set <= U.member_set:
        raise NestingError("L is not contained in U")
    G = U.owner
    Um = np.asarray(U.members)
    Lm = np.asarray(L.members)
    reps_of_u = G.add_table[np.ix_(Um, Lm)].min(axis=1)
    reps = np.unique(reps_of_u)
    m = len(reps)
    coset_id = np.full(G.order, -1, dtype=np.int64)
    rep_to_id = {int(r): i for i, r in enumerate(reps)}
    for u, r in zip(Um, reps_of_u):
        coset_id[u] = rep_to_id[int(r)]
    cadd = coset_id[G.add_table[np.ix_(reps, reps)]]
    factors, gens = _abelian_basis(m, cadd)
    Q = AbelianGroup(factors)
    # quotient index -> coset id
    q_to_coset = np.zeros(Q.order, dtype=np.int64)
    for qi in range(Q.order):
        c = 0
        for coef, g in zip(Q.coords[qi], gens):
            for _ in range(int(coef)):
                c = int(cadd[c, g])
        q_to_coset[qi] = c
    coset_to_q = np.empty(m, dtype=np.int64)
    coset_to_q[q_to_coset] = np.arange(Q.order)
    project = np.full(G.order, -1, dtype=np.int64)
    project[Um] = coset_to_q[coset_id[Um]]
    lift = reps[q_to_coset]
    return Section(U, L, Q, project, lift)


def quotient(G: AbelianGroup, L: Subgroup) -> Section:
    return make_section(whole_group(G), L)


# automorphisms


def translation(G: AbelianGroup, g: int) -> Perm:
    """Right translation ``x -> x + g``."""
    return tuple(int(v) for v in G.add_table[:, g])


def linear_extension(G: AbelianGroup, images: Sequence[int]) -> Perm:
    """The endomorphism sending the ``j``-th factor generator to ``images[j]``."""
    if not G.factors:
        return (0,)
    H = G.coords[list(images)]  # k x k
    return tuple(int(v) for v in G.indices_of(G.coords @ H))


def is_automorphism(G: AbelianGroup, f: Sequence[int]) -> bool:
    if len(f) != G.order or sorted(f) != list(range(G.order)):
        return False
    if not G.factors:
        return True
    images = [f[G.unit(j)] for j in range(G.rank)]
    for j, n in enumerate(G.factors):
        if G.element_order(images[j]) != n:
            return False
    return tuple(f) == linear_extension(G, images)


def _span_add(G: AbelianGroup, span: np.ndarray, g: int) -> np.ndarray:
    cyc = G.indices_of(np.outer(np.arange(G.element_order(g)), G.coords[g]))
    return _sumset(G, span, cyc)


def _orbit(gens: Sequence[Perm], point: int) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def automorphism_generators(G: AbelianGroup, bound: int | None = None) -> list[Perm]:
    """Generators of ``aut(G)`` by backtracking over images of factor generators.

    The search follows the identity on a first path; at level ``j`` it only
    tries images of ``e_j`` outside the orbit already reached by generators
    fixing ``e_0..e_{j-1}``, so the output is a strong generating set relative
    to the base ``(e_0, e_1, ...)``.
    """
    bound = config.GROUP_BOUND if bound is None else bound
    if G.order > bound:
        raise ResourceError(f"group order {G.order} exceeds automorphism bound {bound}")
    k = G.rank
    if k == 0:
        return []
    units = [G.unit(j) for j in range(k)]
    by_order: dict[int, list[int]] = {}
    for x in range(G.order):
        by_order.setdefault(G.element_order(x), []).append(x)

    def extend(prefix: list[int], span: np.ndarray) -> list[int] | None:
        j = len(prefix)
        if j == k:
            return prefix
        n = G.factors[j]
        for h in by_order.get(n, []):
            new = _span_add(G, span, h)
            if len(new) == len(span) * n:
                got = extend(prefix + [h], new)
                if got is not None:
                    return got
        return None

    gens: list[Perm] = []
    spans = [np.array([0], dtype=np.int64)]
    for j in range(k):
        spans.append(_span_add(G, spans[-1], units[j]))

    for j in reversed(range(k)):
        prefix = units[:j]
        n = G.factors[j]
        reached = _orbit(gens, units[j])
        failed: set[int] = set()
        for h in by_order.get(n, []):
            if h in reached or h in failed:
                continue
            new = _span_add(G, spans[j], h)
            if len(new) != len(spans[j]) * n:
                failed.add(h)
                continue
            images = extend(prefix + [h], new)
            if images is None:
                failed |= _orbit(gens, h)
                continue
            gens.append(linear_extension(G, images))
            reached = _orbit(gens, units[j])
    return gens


def automorphism_group(G: AbelianGroup, bound: int | None = None):
    from .perms import PermGroup

    return PermGroup(G.order, automorphism_generators(G, bound), base=[G.unit(j) for j in range(G.rank)])


def holomorph(G: AbelianGroup, bound: int | None = None):
    from .perms import PermGroup

    gens = [translation(G, G.unit(j)) for j in range(G.rank)]
    gens += automorphism_generators(G, bound)
    return PermGroup(G.order, gens)


def power_map(G: AbelianGroup, m: int) -> Perm:
    """The automorphism ``x -> m*x``; requires ``gcd(m, |G|) = 1``."""
    if math.gcd(m, G.order) != 1:
        raise NotABijectionError(f"x -> {m}x is not a bijection of a group of order {G.order}")
    return tuple(int(v) for v in G.multiples(m))


def power_maps(G: AbelianGroup) -> list[Perm]:
    e = G.exponent
    return [power_map(G, m) for m in range(1, max(e, 2)) if math.gcd(m, e) == 1 and math.gcd(m, G.order) == 1]


def rational_cells(G: AbelianGroup) -> list[tuple[int, ...]]:
    """Orbits of the power maps: the generator sets of the cyclic subgroups."""
    e = G.exponent
    units = [m for m in range(1, e + 1) if math.gcd(m, e) == 1] or [1]
    seen = np.full(G.order, -1, dtype=np.int64)
    cells = []
    mults = np.stack([G.multiples(m) for m in units])
    for x in range(G.order):
        if seen[x] >= 0:
            continue
        cell = tuple(sorted({int(v) for v in mults[:, x]}))
        seen[list(cell)] = len(cells)
        cells.append(cell)
    return cells


# direct decompositions


@dataclass(frozen=True)
class Decomposition:
    """``G = G1 x G2`` split along the cyclic factors listed in ``first``."""

    group: AbelianGroup
    first: tuple[int, ...]

    def __post_init__(self) -> None:
        first = tuple(sorted(set(self.first)))
        if any(not 0 <= j < self.group.rank for j in first):
            raise UsageError("factor index out of range")
        object.__setattr__(self, "first", first)

    @property
    def second(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.group.rank) if j not in self.first)

    def factor_indices(self, side: int) -> tuple[int, ...]:
        if side == 1:
            return self.first
        if side == 2:
            return self.second
        raise UsageError("side must be 1 or 2")

    def component(self, side: int) -> Subgroup:
        G = self.group
        return subgroup_generated(G, [G.unit(j) for j in self.factor_indices(side)])

    @cached_property
    def G1(self) -> Subgroup:
        return self.component(1)

    @cached_property
    def G2(self) -> Subgroup:
        return self.component(2)

    def project_element(self, x: int, side: int) -> int:
        keep = self.factor_indices(side)
        c = self.group.element(x)
        return self.group.index(tuple(v if j in keep else 0 for j, v in enumerate(c)))

    @cached_property
    def _projections(self) -> tuple[np.ndarray, np.ndarray]:
        G = self.group
        out = []
        for side in (1, 2):
            keep = np.zeros(G.rank, dtype=np.int64)
            keep[list(self.factor_indices(side))] = 1
            out.append(G.indices_of(G.coords * keep))
        return out[0], out[1]

    def projection_array(self, side: int) -> np.ndarray:
        if side not in (1, 2):
            raise UsageError("side must be 1 or 2")
        return self._projections[side - 1]


def projection(decomposition: Decomposition, X: Iterable[int], side: int = 1) -> frozenset[int]:
    """Componentwise projection of ``X`` onto ``G1`` (side 1) or ``G2`` (side 2)."""
    if not isinstance(decomposition, Decomposition):
        raise UsageError("projection needs a registered Decomposition")
    arr = decomposition.projection_array(side)
    return frozenset(int(arr[x]) for x in X)


def product_index(G1: AbelianGroup, G2: AbelianGroup, a: int, b: int) -> int:
    """Index of ``(a, b)`` in ``make_group(G1.factors + G2.factors)``."""
    return a * G2.order + b


def direct_product(G1: AbelianGroup, G2: AbelianGroup) -> AbelianGroup:
    return AbelianGroup(G1.factors + G2.factors)


def all_elements_orders(G: AbelianGroup) -> dict[int, int]:
    return {x: G.element_order(x) for x in range(G.order)}


def iter_tuples(G: AbelianGroup):
    return itertools.product(*(range(f) for f in G.factors))
