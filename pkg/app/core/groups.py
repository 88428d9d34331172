"""
Finite groups on dense element indices.

A group is a Cayley table over {0..n-1}. Subgroups, quotients, products and
homomorphisms are tables over those indices, and every constructor validates
its result exhaustively (numpy does the O(n^3) associativity sweep).
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.errors import (
    DomainMismatch,
    MalformedTable,
    NoIdentity,
    NoInverse,
    NotAHomomorphism,
    NotAssociative,
    NotNormal,
)

logger = logging.getLogger(__name__)

Table = Tuple[Tuple[int, ...], ...]
Map = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    cayley: Table
    identity: int
    inverse: Map
    name: str = field(default="", compare=False)
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(self.cayley))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or (self._hash == other._hash and self.cayley == other.cayley)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.cayley)

    def elements(self) -> range:
        return range(len(self.cayley))

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.cayley[self.cayley[g][x]][self.inverse[g]]

    def product(self, items: Iterable[int]) -> int:
        acc = self.identity
        for x in items:
            acc = self.cayley[acc][x]
        return acc

    @cached_property
    def table(self) -> np.ndarray:
        arr = np.asarray(self.cayley, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def orders(self) -> Map:
        out = []
        for x in self.elements():
            k, y = 1, x
            while y != self.identity:
                y = self.cayley[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(np.asarray(self.orders, dtype=np.int64)))

    def renamed(self, name: str) -> "FiniteGroup":
        return FiniteGroup(self.cayley, self.identity, self.inverse, name)


def make_group(cayley: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    rows = [list(r) for r in cayley]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise MalformedTable(f"Cayley table must be square and non-empty, got {n} rows")
    T = np.asarray(rows, dtype=np.int64)
    if T.min() < 0 or T.max() >= n:
        raise MalformedTable(f"Cayley entries must lie in 0..{n - 1}")

    for a in range(n):
        left = T[T[a]]        # left[b, c] = (a*b)*c
        right = T[a][T]       # right[b, c] = a*(b*c)
        bad = np.argwhere(left != right)
        if bad.size:
            b, c = bad[0]
            raise NotAssociative(a, int(b), int(c))

    idx = np.arange(n)
    two_sided = np.all(T == idx[None, :], axis=1) & np.all(T == idx[:, None], axis=0)
    found = np.flatnonzero(two_sided)
    if found.size == 0:
        raise NoIdentity("no two-sided identity element")
    e = int(found[0])

    hits = (T == e) & (T == e).T
    counts = hits.sum(axis=1)
    bad_inv = np.flatnonzero(counts != 1)
    if bad_inv.size:
        raise NoInverse(int(bad_inv[0]))
    inverse = tuple(int(x) for x in np.argmax(hits, axis=1))
    table = tuple(tuple(int(x) for x in row) for row in rows)
    return FiniteGroup(table, e, inverse, name)


@dataclass(frozen=True)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    map: Map

    def __post_init__(self) -> None:
        n, m = self.domain.order, self.codomain.order
        if len(self.map) != n:
            raise NotAHomomorphism(f"map has {len(self.map)} entries, domain has order {n}")
        if any(not (0 <= y < m) for y in self.map):
            raise NotAHomomorphism("map values outside the codomain")
        M = np.asarray(self.map, dtype=np.int64)
        lhs = M[self.domain.table]
        rhs = self.codomain.table[M[:, None], M[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            x, y = bad[0]
            raise NotAHomomorphism(f"f({x}*{y}) != f({x})*f({y})")

    def __call__(self, x: int) -> int:
        return self.map[x]

    @cached_property
    def is_injective(self) -> bool:
        return len(set(self.map)) == self.domain.order

    @cached_property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.codomain.order

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    def then(self, other: "GroupHom") -> "GroupHom":
        return compose(self, other)

    def inverse(self) -> "GroupHom":
        if not self.is_bijective:
            raise NotAHomomorphism("only bijective homomorphisms can be inverted")
        inv = [0] * self.domain.order
        for x, y in enumerate(self.map):
            inv[y] = x
        return GroupHom(self.codomain, self.domain, tuple(inv))


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, tuple(G.elements()))


def trivial_hom(G: FiniteGroup, K: FiniteGroup) -> GroupHom:
    return GroupHom(G, K, (K.identity,) * G.order)


def compose(f: GroupHom, g: GroupHom) -> GroupHom:
    """g after f."""
    if f.codomain != g.domain:
        raise DomainMismatch(f"cannot compose {f.codomain!r} into {g.domain!r}")
    return GroupHom(f.domain, g.codomain, tuple(g.map[y] for y in f.map))


# SUBGROUPS
# ---------

@dataclass(frozen=True)
class Subgroup:
    ambient: FiniteGroup
    elements: Map

    def __post_init__(self) -> None:
        G, S = self.ambient, set(self.elements)
        if list(self.elements) != sorted(S):
            raise MalformedTable("subgroup elements must be sorted and distinct")
        if G.identity not in S:
            raise MalformedTable("subgroup must contain the identity")
        for a in self.elements:
            if G.inverse[a] not in S:
                raise MalformedTable(f"subgroup not closed under inverse at {a}")
            row = G.cayley[a]
            for b in self.elements:
                if row[b] not in S:
                    raise MalformedTable(f"subgroup not closed under {a}*{b}")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def position(self) -> Dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def as_group(self) -> Tuple[FiniteGroup, GroupHom]:
        """The subgroup re-indexed densely (sorted order), with its embedding."""
        return _as_group(self)


@lru_cache(maxsize=4096)
def _as_group(S: Subgroup) -> Tuple[FiniteGroup, GroupHom]:
    G, pos = S.ambient, S.position
    table = [[pos[G.cayley[a][b]] for b in S.elements] for a in S.elements]
    H = make_group(table)
    return H, GroupHom(H, G, S.elements)


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = sorted(set(gens))
    seen = {G.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.cayley[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return Subgroup(G, tuple(sorted(seen)))


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(G.elements()))


def is_normal(S: Subgroup) -> bool:
    G = S.ambient
    members = S.members
    return all(G.conj(g, x) in members for g in G.elements() for x in S.elements)


def center(G: FiniteGroup) -> Subgroup:
    T = G.table
    central = np.flatnonzero(np.all(T == T.T, axis=1))
    return Subgroup(G, tuple(int(z) for z in central))


def kernel(f: GroupHom) -> Subgroup:
    e = f.codomain.identity
    return Subgroup(f.domain, tuple(x for x in f.domain.elements() if f.map[x] == e))


def image(f: GroupHom) -> Subgroup:
    return Subgroup(f.codomain, tuple(sorted(set(f.map))))


class Quotient(NamedTuple):
    group: FiniteGroup
    projection: GroupHom

    @property
    def representatives(self) -> Map:
        """Minimal element of each coset, indexed by quotient element."""
        reps: Dict[int, int] = {}
        for x, q in enumerate(self.projection.map):
            reps.setdefault(q, x)
        return tuple(reps[q] for q in range(self.group.order))


def quotient(G: FiniteGroup, N: Subgroup) -> Quotient:
    if N.ambient != G:
        raise DomainMismatch("normal subgroup lives in another group")
    if not is_normal(N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G!r}")
    label = [0] * G.order
    for x in G.elements():
        label[x] = min(G.cayley[x][n] for n in N.elements)
    mins = sorted(set(label))
    dense = {m: i for i, m in enumerate(mins)}
    table = [[dense[label[G.cayley[a][b]]] for b in mins] for a in mins]
    Q = make_group(table)
    return Quotient(Q, GroupHom(G, Q, tuple(dense[label[x]] for x in G.elements())))


# PRODUCTS
# --------

class DirectProduct(NamedTuple):
    group: FiniteGroup
    injections: Tuple[GroupHom, GroupHom]
    projections: Tuple[GroupHom, GroupHom]

    def element(self, x: int, y: int) -> int:
        return x * self.projections[1].codomain.order + y


def direct_product(G1: FiniteGroup, G2: FiniteGroup) -> DirectProduct:
    n2 = G2.order
    table = [
        [G1.cayley[a1][b1] * n2 + G2.cayley[a2][b2] for b1 in G1.elements() for b2 in G2.elements()]
        for a1 in G1.elements()
        for a2 in G2.elements()
    ]
    name = f"{G1.name}x{G2.name}" if G1.name and G2.name else ""
    P = make_group(table, name)
    i1 = GroupHom(G1, P, tuple(x * n2 + G2.identity for x in G1.elements()))
    i2 = GroupHom(G2, P, tuple(G1.identity * n2 + y for y in G2.elements()))
    p1 = GroupHom(P, G1, tuple(z // n2 for z in P.elements()))
    p2 = GroupHom(P, G2, tuple(z % n2 for z in P.elements()))
    return DirectProduct(P, (i1, i2), (p1, p2))


# GENERATORS AND HOMOMORPHISM SEARCH
# ----------------------------------

@lru_cache(maxsize=4096)
def generating_set(G: FiniteGroup) -> Map:
    """Greedy generating set: highest-order elements first, skipping those already generated."""
    gens: List[int] = []
    current = {G.identity}
    for x in sorted(G.elements(), key=lambda x: (-G.orders[x], x)):
        if x in current:
            continue
        gens.append(x)
        current = set(subgroup_generated(G, gens).elements)
        if len(current) == G.order:
            break
    return tuple(gens)


class SpanningTree(NamedTuple):
    gens: Map
    order: Map
    parent: Dict[int, Tuple[int, int]]


@lru_cache(maxsize=4096)
def spanning_tree(G: FiniteGroup) -> SpanningTree:
    """BFS tree of the right Cayley graph on generating_set(G), rooted at the identity."""
    gens = generating_set(G)
    parent: Dict[int, Tuple[int, int]] = {}
    order = [G.identity]
    queue = deque([G.identity])
    while queue:
        g = queue.popleft()
        for x in gens:
            y = G.cayley[g][x]
            if y != G.identity and y not in parent:
                parent[y] = (g, x)
                order.append(y)
                queue.append(y)
    return SpanningTree(gens, tuple(order), parent)


def extend_hom(
    G: FiniteGroup,
    gens: Sequence[int],
    images: Sequence[int],
    K: FiniteGroup,
) -> Optional[Map]:
    """Extend gens -> images to a homomorphism <gens> -> K, or None if inconsistent.

    Consistency on every edge x -> x*g of the Cayley graph implies f(xw) = f(x)f(w)
    for every word w, so no separate hom check is needed. Elements outside <gens>
    are left as -1.
    """
    f = [-1] * G.order
    f[G.identity] = K.identity
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        fx = f[x]
        for g, fg in zip(gens, images):
            y = G.cayley[x][g]
            fy = K.cayley[fx][fg]
            if f[y] == -1:
                f[y] = fy
                queue.append(y)
            elif f[y] != fy:
                return None
    return tuple(f)


def homomorphisms(G: FiniteGroup, K: FiniteGroup) -> Iterator[GroupHom]:
    gens = generating_set(G)
    candidates = [[y for y in K.elements() if G.orders[x] % K.orders[y] == 0] for x in gens]
    for images in itertools.product(*candidates):
        f = extend_hom(G, gens, images, K)
        if f is not None:
            yield GroupHom(G, K, f)


def find_isomorphism(G1: FiniteGroup, G2: FiniteGroup) -> Optional[GroupHom]:
    if G1.order != G2.order or sorted(G1.orders) != sorted(G2.orders):
        return None
    if G1.is_abelian != G2.is_abelian:
        return None
    gens = generating_set(G1)
    candidates = [[y for y in G2.elements() if G2.orders[y] == G1.orders[x]] for x in gens]
    for images in itertools.product(*candidates):
        f = extend_hom(G1, gens, images, G2)
        if f is not None and len(set(f)) == G2.order:
            return GroupHom(G1, G2, f)
    return None


# AUTOMORPHISMS
# -------------

@lru_cache(maxsize=1024)
def automorphism_maps(G: FiniteGroup) -> Tuple[Map, ...]:
    """All automorphisms as element maps, sorted; the identity map comes first."""
    gens = generating_set(G)
    candidates = [[y for y in G.elements() if G.orders[y] == G.orders[x]] for x in gens]
    found = []
    for images in itertools.product(*candidates):
        f = extend_hom(G, gens, images, G)
        if f is not None and len(set(f)) == G.order:
            found.append(f)
    logger.debug("|Aut(%r)| = %d", G, len(found))
    return tuple(sorted(found))


@lru_cache(maxsize=1024)
def inner_maps(G: FiniteGroup) -> frozenset:
    return frozenset(tuple(G.conj(g, x) for x in G.elements()) for g in G.elements())


def automorphisms(G: FiniteGroup) -> List[GroupHom]:
    return [GroupHom(G, G, f) for f in automorphism_maps(G)]


def compose_maps(first: Map, second: Map) -> Map:
    """second after first"""
    return tuple(second[y] for y in first)


def invert_map(f: Map) -> Map:
    inv = [0] * len(f)
    for x, y in enumerate(f):
        inv[y] = x
    return tuple(inv)


def inner_coset_representative(G: FiniteGroup, alpha: Map) -> Map:
    """Canonical representative of alpha*Inn(G): the least map in the coset."""
    return min(compose_maps(alpha, c) for c in inner_maps(G))


class AutGroup:
    """Aut(G) with its elements indexed by position in automorphism_maps(G)."""

    def __init__(self, G: FiniteGroup) -> None:
        self.base = G
        self.maps = automorphism_maps(G)
        self.index = {f: i for i, f in enumerate(self.maps)}

    def __len__(self) -> int:
        return len(self.maps)

    def index_of(self, f: Map) -> int:
        return self.index[tuple(f)]

    @cached_property
    def group(self) -> FiniteGroup:
        # product a*b is "apply b, then a"
        table = [[self.index[compose_maps(b, a)] for b in self.maps] for a in self.maps]
        return make_group(table, f"Aut({self.base.name})" if self.base.name else "")

    @cached_property
    def inner(self) -> Subgroup:
        inn = inner_maps(self.base)
        return Subgroup(self.group, tuple(sorted(self.index[f] for f in inn)))

    @cached_property
    def out(self) -> Quotient:
        return quotient(self.group, self.inner)


@lru_cache(maxsize=256)
def aut_group(G: FiniteGroup) -> AutGroup:
    return AutGroup(G)


def inner_automorphisms(G: FiniteGroup) -> Subgroup:
    return aut_group(G).inner


def out_group(G: FiniteGroup) -> Quotient:
    return aut_group(G).out


def permuted(G: FiniteGroup, perm: Sequence[int]) -> Tuple[FiniteGroup, GroupHom]:
    """Relabel G along perm (old index x becomes perm[x]); returns the copy and the iso G -> copy."""
    n = G.order
    inv = invert_map(tuple(perm))
    table = [[perm[G.cayley[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    P = make_group(table, G.name)
    return P, GroupHom(G, P, tuple(perm))


# ACTIONS
# -------

@dataclass(frozen=True)
class Action:
    """A left action of `acting` on `module` by automorphisms: table[g][m] = g.m"""

    acting: FiniteGroup
    module: FiniteGroup
    table: Tuple[Map, ...]

    def __post_init__(self) -> None:
        G, M = self.acting, self.module
        if len(self.table) != G.order or any(len(row) != M.order for row in self.table):
            raise MalformedTable("action table has the wrong shape")
        for g, f in enumerate(self.table):
            if len(set(f)) != M.order or any(
                f[M.cayley[a][b]] != M.cayley[f[a]][f[b]] for a in M.elements() for b in M.elements()
            ):
                raise NotAHomomorphism(f"element {g} does not act by an automorphism")
        for g in G.elements():
            for h in G.elements():
                if self.table[G.cayley[g][h]] != compose_maps(self.table[h], self.table[g]):
                    raise NotAHomomorphism(f"action is not multiplicative at ({g}, {h})")

    def __call__(self, g: int, m: int) -> int:
        return self.table[g][m]

    @property
    def is_trivial(self) -> bool:
        ident = tuple(self.module.elements())
        return all(row == ident for row in self.table)

    def as_hom(self) -> GroupHom:
        aut = aut_group(self.module)
        return GroupHom(self.acting, aut.group, tuple(aut.index_of(row) for row in self.table))

    @classmethod
    def trivial(cls, G: FiniteGroup, M: FiniteGroup) -> "Action":
        return cls(G, M, (tuple(M.elements()),) * G.order)

    @classmethod
    def from_hom(cls, hom: GroupHom, module: FiniteGroup) -> "Action":
        aut = aut_group(module)
        if hom.codomain != aut.group:
            raise DomainMismatch("hom does not land in Aut(module)")
        return cls(hom.domain, module, tuple(aut.maps[a] for a in hom.map))
