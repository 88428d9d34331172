"""
Cocycle side of the extension calculus.

Crossed morphisms (degree one, any coefficients), normalized 2-cocycles with
abelian coefficients, the Baer group law on extensions with abelian kernel, and
the automorphisms of an extension read off from crossed morphisms into the
center of its kernel.

2-cocycles are searched in a normal form: values on the edges of the spanning
tree of the Cayley graph are forced to the identity, the remaining edge values
are solved for, and the rest of the table is filled in along the tree. Two
tree-normal cocycles are cohomologous iff they differ by the coboundary of a
cochain that satisfies c(px) = c(p) * p.c(x) along the tree.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from app.config import settings
from app.core.extensions import (
    Extension,
    ExtIso,
    center_data,
    ext_isomorphisms,
    extension_fiber_product,
    induced_action,
    pushforward,
)
from app.core.groups import (
    Action,
    FiniteGroup,
    GroupHom,
    Map,
    Table,
    make_group,
    spanning_tree,
)
from app.errors import (
    ActionMismatch,
    BoundExceeded,
    MalformedTable,
    NotAbelian,
    NotAHomomorphism,
    NotASection,
    SignatureMismatch,
    ViolationFound,
)

logger = logging.getLogger(__name__)


# CROSSED MORPHISMS
# -----------------

@dataclass(frozen=True)
class CrossedMorphism:
    """a: G -> M with a(gh) = a(g) * g.a(h)"""

    action: Action
    map: Map

    def __post_init__(self) -> None:
        G, M, act = self.group, self.coeff, self.action.table
        a = self.map
        if len(a) != G.order or any(not (0 <= m < M.order) for m in a):
            raise MalformedTable("crossed morphism table has the wrong shape")
        if a[G.identity] != M.identity:
            raise NotAHomomorphism("crossed morphism must send 1 to 1")
        for g in G.elements():
            for h in G.elements():
                if a[G.cayley[g][h]] != M.cayley[a[g]][act[g][a[h]]]:
                    raise NotAHomomorphism(f"a({g}*{h}) != a({g}) * {g}.a({h})")

    @property
    def group(self) -> FiniteGroup:
        return self.action.acting

    @property
    def coeff(self) -> FiniteGroup:
        return self.action.module

    def __call__(self, g: int) -> int:
        return self.map[g]

    @property
    def is_trivial(self) -> bool:
        return all(m == self.coeff.identity for m in self.map)


def _extend_crossed(action: Action, gens: Sequence[int], images: Sequence[int]) -> Optional[Map]:
    # consistency on every Cayley edge x -> xg means a(xg) = a(x) * x.a(g) for all words
    G, M, act = action.acting, action.module, action.table
    a = [-1] * G.order
    a[G.identity] = M.identity
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g, ag in zip(gens, images):
            y = G.cayley[x][g]
            ay = M.cayley[a[x]][act[x][ag]]
            if a[y] == -1:
                a[y] = ay
                queue.append(y)
            elif a[y] != ay:
                return None
    return tuple(a)


def z1_cocycles(action: Action) -> List[CrossedMorphism]:
    """Every crossed morphism G -> M, sorted by table; the trivial one comes first."""
    G, M = action.acting, action.module
    gens = spanning_tree(G).gens
    found = []
    for images in itertools.product(M.elements(), repeat=len(gens)):
        a = _extend_crossed(action, gens, images)
        if a is not None:
            found.append(a)
    return [CrossedMorphism(action, a) for a in sorted(found)]


def crossed_morphism_group(action: Action) -> Tuple[FiniteGroup, List[CrossedMorphism]]:
    """Z^1(G, M) under the pointwise product, for abelian M."""
    M = action.module
    if not M.is_abelian:
        raise NotAbelian("pointwise product of crossed morphisms needs abelian coefficients")
    cms = z1_cocycles(action)
    index = {c.map: i for i, c in enumerate(cms)}
    table = [
        [index[tuple(M.cayley[x][y] for x, y in zip(a.map, b.map))] for b in cms]
        for a in cms
    ]
    return make_group(table, "Z1"), cms


class H1Classes(NamedTuple):
    cocycles: List[CrossedMorphism]
    classes: List[Tuple[int, ...]]

    @property
    def distinguished(self) -> int:
        """Index of the class of the trivial crossed morphism."""
        return next(i for i, c in enumerate(self.classes) if 0 in c)

    def class_of(self, a: Map) -> int:
        pos = next(i for i, c in enumerate(self.cocycles) if c.map == tuple(a))
        return next(i for i, c in enumerate(self.classes) if pos in c)

    def __len__(self) -> int:
        return len(self.classes)


def twist_by(action: Action, m: int, a: Map) -> Map:
    """g -> m * a(g) * g.m^-1"""
    G, M, act = action.acting, action.module, action.table
    return tuple(M.cayley[M.cayley[m][a[g]]][act[g][M.inverse[m]]] for g in G.elements())


def h1_coc(action: Action) -> H1Classes:
    """Crossed morphisms modulo the twisting action of M; classes are lists of cocycle indices."""
    cms = z1_cocycles(action)
    index = {c.map: i for i, c in enumerate(cms)}
    seen: Set[int] = set()
    classes = []
    for i, c in enumerate(cms):
        if i in seen:
            continue
        orbit = sorted({index[twist_by(action, m, c.map)] for m in action.module.elements()})
        seen.update(orbit)
        classes.append(tuple(orbit))
    return H1Classes(cms, classes)


# AUTOMORPHISMS OF AN EXTENSION
# -----------------------------

def cocycle_automorphism(E: Extension, phi: CrossedMorphism) -> ExtIso:
    """x -> phi(pi(x)) * x, for phi a crossed morphism G -> Z(H)."""
    cz = center_data(E)
    T = E.total
    f = tuple(T.cayley[cz.into_total.map[phi.map[E.proj.map[x]]]][x] for x in T.elements())
    return ExtIso(E, E, GroupHom(T, T, f))


def aut_extension_correspondence(E: Extension) -> List[Tuple[CrossedMorphism, ExtIso]]:
    """Pairs (phi, f_phi) over Z^1(G, Z), with f_phi o f_psi = f_{phi psi} checked on all pairs."""
    cz = center_data(E)
    Z = cz.group
    cms = z1_cocycles(cz.action)
    pairs = [(phi, cocycle_automorphism(E, phi)) for phi in cms]
    by_map = {phi.map: f for phi, f in pairs}
    for phi, f in pairs:
        for psi, g in pairs:
            prod = tuple(Z.cayley[a][b] for a, b in zip(phi.map, psi.map))
            if g.compose(f).map.map != by_map[prod].map.map:
                raise ViolationFound(
                    "cocycle automorphisms do not compose like their crossed morphisms",
                    counterexample={"phi": list(phi.map), "psi": list(psi.map)},
                )
    return pairs


def aut_extension(E: Extension) -> List[ExtIso]:
    """Aut(E), by direct search and by the cocycle formula; the two sets must coincide."""
    direct = sorted(ext_isomorphisms(E, E), key=lambda f: f.map.map)
    via = sorted((f for _, f in aut_extension_correspondence(E)), key=lambda f: f.map.map)
    if [f.map.map for f in direct] != [f.map.map for f in via]:
        raise ViolationFound(
            f"|Aut(E)| by search is {len(direct)}, by crossed morphisms {len(via)}",
            counterexample={"direct": len(direct), "crossed": len(via)},
        )
    logger.debug("|Aut(%r)| = %d", E, len(direct))
    return direct


# 2-COCYCLES
# ----------

def _require_abelian(action: Action) -> None:
    if not action.module.is_abelian:
        raise NotAbelian(f"2-cocycles need abelian coefficients, got {action.module!r}")


def cocycle_defect(action: Action, table: Table) -> Optional[Tuple[int, int, int]]:
    """First (g, h, k) where g.f(h,k) + f(g,hk) != f(gh,k) + f(g,h), or None."""
    G, A = action.acting, action.module
    n = G.order
    F = np.asarray(table, dtype=np.int64)
    act = np.asarray(action.table, dtype=np.int64)
    Gt, At = G.table, A.table
    i = np.arange(n)
    lhs = At[act[i[:, None, None], F[None, :, :]], F[i[:, None, None], Gt[None, :, :]]]
    rhs = At[F[Gt[:, :, None], i[None, None, :]], F[:, :, None]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        g, h, k = bad[0]
        return int(g), int(h), int(k)
    return None


@dataclass(frozen=True)
class TwoCocycle:
    """Normalized f: G x G -> A satisfying the cocycle identity for the given action."""

    action: Action
    table: Table

    def __post_init__(self) -> None:
        _require_abelian(self.action)
        G, A = self.group, self.coeff
        if len(self.table) != G.order or any(len(r) != G.order for r in self.table):
            raise MalformedTable("2-cocycle table has the wrong shape")
        e, z = G.identity, A.identity
        if any(self.table[e][g] != z or self.table[g][e] != z for g in G.elements()):
            raise MalformedTable("2-cocycle must be normalized")
        bad = cocycle_defect(self.action, self.table)
        if bad is not None:
            raise MalformedTable(f"cocycle identity fails at {bad}")

    @property
    def group(self) -> FiniteGroup:
        return self.action.acting

    @property
    def coeff(self) -> FiniteGroup:
        return self.action.module

    def __add__(self, other: "TwoCocycle") -> "TwoCocycle":
        if other.action != self.action:
            raise ActionMismatch("cannot add cocycles for different actions")
        return TwoCocycle(self.action, add_tables(self.coeff, self.table, other.table))

    def __neg__(self) -> "TwoCocycle":
        inv = self.coeff.inverse
        return TwoCocycle(self.action, tuple(tuple(inv[x] for x in row) for row in self.table))

    @cached_property
    def is_zero(self) -> bool:
        z = self.coeff.identity
        return all(x == z for row in self.table for x in row)


def add_tables(A: FiniteGroup, t1: Table, t2: Table) -> Table:
    return tuple(tuple(A.cayley[x][y] for x, y in zip(r1, r2)) for r1, r2 in zip(t1, t2))


def coboundary(action: Action, c: Map) -> Table:
    """(dc)(g, h) = g.c(h) + c(g) - c(gh)"""
    G, A, act = action.acting, action.module, action.table
    return tuple(
        tuple(A.cayley[A.cayley[act[g][c[h]]][c[g]]][A.inverse[c[G.cayley[g][h]]]] for h in G.elements())
        for g in G.elements()
    )


def fill_twist(
    G: FiniteGroup,
    K: FiniteGroup,
    lift: Sequence[Map],
    edges: Dict[Tuple[int, int], int],
) -> Table:
    """Extend twist values t(g, x), x a generator, to all of G x G along the spanning tree.

    Edges missing from `edges` get the identity. lift[g] is the map by which g acts
    on the values (an automorphism of K).
    """
    tree = spanning_tree(G)
    e, n = G.identity, G.order
    t = [[K.identity] * n for _ in range(n)]
    for (g, x), v in edges.items():
        t[g][x] = v
    for g in G.elements():
        row, lg = t[g], lift[g]
        for y in tree.order[1:]:
            p, x = tree.parent[y]
            if p == e:
                continue
            row[y] = K.cayley[K.cayley[K.inverse[lg[t[p][x]]]][row[p]]][t[G.cayley[g][p]][x]]
    return tuple(tuple(r) for r in t)


def free_edges(G: FiniteGroup) -> List[Tuple[int, int]]:
    """Edges (g, x) of the Cayley graph that are neither tree edges nor leave the identity."""
    tree = spanning_tree(G)
    return [
        (g, x)
        for g in G.elements()
        if g != G.identity
        for x in tree.gens
        if tree.parent.get(G.cayley[g][x]) != (g, x)
    ]


def _edge_residual(action: Action, t: Table) -> List[int]:
    # cocycle identity on (g, h, x) for x a generator; enough since d(df) = 0
    G, A, act = action.acting, action.module, action.table
    gens = spanning_tree(G).gens
    out = []
    for g in G.elements():
        for h in G.elements():
            gh = G.cayley[g][h]
            for x in gens:
                lhs = A.cayley[act[g][t[h][x]]][t[g][G.cayley[h][x]]]
                rhs = A.cayley[t[gh][x]][t[g][h]]
                out.append(A.cayley[lhs][A.inverse[rhs]])
    return out


def _partial_sums(At: np.ndarray, identity: int, blocks: Sequence[np.ndarray], width: int) -> np.ndarray:
    acc = np.full((1, width), identity, dtype=At.dtype)
    for P in blocks:
        acc = At[acc[:, None, :], P[None, :, :]].reshape(-1, width)
    return acc


def _digits(row: int, count: int, base: int) -> List[int]:
    out = []
    for _ in range(count):
        row, d = divmod(row, base)
        out.append(d)
    return out[::-1]


def tree_normalized_cocycles(action: Action) -> List[Table]:
    """Every normalized 2-cocycle that is the identity on the spanning-tree edges, sorted.

    The residual of the cocycle identity is additive in the free edge values, so the
    solutions are found by splitting the free edges in two halves and matching
    partial sums (numpy) instead of scanning |A|^m assignments.
    """
    _require_abelian(action)
    G, A = action.acting, action.module
    edges = free_edges(G)
    if A.order == 1 or not edges:
        t = fill_twist(G, A, action.table, {})
        return [t] if all(r == A.identity for r in _edge_residual(action, t)) else []

    half = (len(edges) + 1) // 2
    if A.order ** half > settings.search_limit:
        raise BoundExceeded(
            f"cocycle search over {len(edges)} free edges with |A| = {A.order} exceeds search_limit"
        )

    dtype = np.int16 if A.order < 1 << 15 else np.int64
    phis = []
    for edge in edges:
        rows = [_edge_residual(action, fill_twist(G, A, action.table, {edge: a})) for a in A.elements()]
        phis.append(np.asarray(rows, dtype=dtype))
    live = np.flatnonzero(np.any(np.stack(phis) != A.identity, axis=(0, 1)))
    if live.size == 0:
        phis = [np.full((A.order, 1), A.identity, dtype=dtype) for _ in edges]
        width = 1
    else:
        phis = [P[:, live] for P in phis]
        width = int(live.size)

    At = A.table.astype(dtype)
    inv = np.asarray(A.inverse, dtype=dtype)
    left = _partial_sums(At, A.identity, phis[:half], width)
    right = inv[_partial_sums(At, A.identity, phis[half:], width)]

    wanted: Dict[bytes, List[int]] = {}
    for r in range(right.shape[0]):
        wanted.setdefault(right[r].tobytes(), []).append(r)

    out = []
    for r in range(left.shape[0]):
        for s in wanted.get(left[r].tobytes(), ()):
            values = _digits(r, half, A.order) + _digits(s, len(edges) - half, A.order)
            out.append(fill_twist(G, A, action.table, dict(zip(edges, values))))
    logger.debug("%d tree-normal cocycles over %d free edges", len(out), len(edges))
    return sorted(out)


def tree_cochains(action: Action) -> List[Map]:
    """Cochains c with c(1) = 1 and c(px) = c(p) * p.c(x) along every tree edge."""
    G, A, act = action.acting, action.module, action.table
    tree = spanning_tree(G)
    out = []
    for values in itertools.product(A.elements(), repeat=len(tree.gens)):
        c = [A.identity] * G.order
        at_gen = dict(zip(tree.gens, values))
        for y in tree.order[1:]:
            p, x = tree.parent[y]
            c[y] = A.cayley[c[p]][act[p][at_gen[x]]]
        out.append(tuple(c))
    return out


def cohomology_representatives(action: Action) -> List[Table]:
    """One tree-normal cocycle per cohomology class; the zero class comes first."""
    A, G = action.module, action.acting
    zero = tuple((A.identity,) * G.order for _ in G.elements())
    cocycles = sorted(tree_normalized_cocycles(action), key=lambda t: (t != zero, t))
    shifts = {coboundary(action, c) for c in tree_cochains(action)}
    seen: Set[Table] = set()
    reps = []
    for t in cocycles:
        if t in seen:
            continue
        reps.append(t)
        seen.update(add_tables(A, t, b) for b in shifts)
    return reps


class CohomologyData(NamedTuple):
    cocycles: List[TwoCocycle]
    coboundaries: List[TwoCocycle]
    representatives: List[TwoCocycle]

    @property
    def h2_order(self) -> int:
        return len(self.representatives)


def normalized_cochains(action: Action) -> List[Map]:
    G, A = action.acting, action.module
    if A.order ** (G.order - 1) > settings.search_limit:
        raise BoundExceeded(f"|A|^(|G|-1) = {A.order}^{G.order - 1} exceeds search_limit")
    others = [g for g in G.elements() if g != G.identity]
    out = []
    for values in itertools.product(A.elements(), repeat=len(others)):
        c = [A.identity] * G.order
        for g, v in zip(others, values):
            c[g] = v
        out.append(tuple(c))
    return out


def two_cocycles(action: Action) -> CohomologyData:
    """Z^2 = representatives + B^2, B^2 from all normalized cochains, and H^2 representatives."""
    _require_abelian(action)
    A = action.module
    reps = cohomology_representatives(action)
    bounds = sorted({coboundary(action, c) for c in normalized_cochains(action)})
    cocycles = sorted({add_tables(A, r, b) for r in reps for b in bounds})
    return CohomologyData(
        [TwoCocycle(action, t) for t in cocycles],
        [TwoCocycle(action, t) for t in bounds],
        [TwoCocycle(action, t) for t in reps],
    )


def cohomologous(f1: TwoCocycle, f2: TwoCocycle) -> bool:
    diff = add_tables(f1.coeff, f1.table, (-f2).table)
    return diff in {coboundary(f1.action, c) for c in normalized_cochains(f1.action)}


# EXTENSIONS FROM TWISTED PRODUCTS
# --------------------------------

def twisted_extension(G: FiniteGroup, H: FiniteGroup, lift: Sequence[Map], twist: Table, name: str = "") -> Extension:
    """E on H x G with (a, g)(b, h) = (a * g.b * t(g, h), gh); (a, g) has index g*|H| + a."""
    m = H.order
    table = []
    for g in G.elements():
        lg, tg = lift[g], twist[g]
        for a in H.elements():
            row = []
            for h in G.elements():
                gh = G.cayley[g][h]
                for b in H.elements():
                    row.append(gh * m + H.cayley[H.cayley[a][lg[b]]][tg[h]])
            table.append(row)
    E = make_group(table, name)
    incl = GroupHom(H, E, tuple(G.identity * m + a for a in H.elements()))
    proj = GroupHom(E, G, tuple(x // m for x in E.elements()))
    return Extension(H, E, G, incl, proj)


def extension_from_cocycle(f: TwoCocycle) -> Extension:
    return twisted_extension(f.group, f.coeff, f.action.table, f.table)


def semidirect_extension(action: Action) -> Extension:
    """M x| G as an extension of G by M."""
    G, M = action.acting, action.module
    trivial = tuple((M.identity,) * G.order for _ in G.elements())
    return twisted_extension(G, M, action.table, trivial)


split_extension = semidirect_extension


def cocycle_from_extension(E: Extension, set_section: Optional[Sequence[int]] = None) -> TwoCocycle:
    """f(g, h) = s(g) s(h) s(gh)^-1, read back in the kernel."""
    if not E.sub.is_abelian:
        raise NotAbelian("cocycle_from_extension needs an abelian kernel")
    s = tuple(E.set_section if set_section is None else set_section)
    G, T = E.quot, E.total
    if len(s) != G.order or s[G.identity] != T.identity or any(E.proj.map[s[g]] != g for g in G.elements()):
        raise NotASection("set section must be a right inverse of proj with s(1) = 1")
    r = E.restrict
    table = tuple(
        tuple(r[T.cayley[T.cayley[s[g]][s[h]]][T.inverse[s[G.cayley[g][h]]]]] for h in G.elements())
        for g in G.elements()
    )
    return TwoCocycle(induced_action(E), table)


# BAER GROUP LAW
# --------------

def _baer_operands(E1: Extension, E2: Extension) -> Tuple[FiniteGroup, Action]:
    if E1.sub != E2.sub or E1.quot != E2.quot:
        raise SignatureMismatch("Baer operations need a common kernel and quotient")
    if not E1.sub.is_abelian:
        raise NotAbelian("Baer operations need an abelian kernel")
    a1, a2 = induced_action(E1), induced_action(E2)
    if a1.table != a2.table:
        raise ActionMismatch("extensions induce different actions of G on the kernel")
    return E1.sub, a1


def _combine(E1: Extension, E2: Extension, invert_second: bool) -> Extension:
    A, _ = _baer_operands(E1, E2)
    fp = extension_fiber_product(E1, E2)
    n = A.order
    B = fp.kernel.group
    op = tuple(A.cayley[z // n][A.inverse[z % n] if invert_second else z % n] for z in B.elements())
    return pushforward(fp.extension, GroupHom(B, A, op))


def baer_sum(E1: Extension, E2: Extension) -> Extension:
    return _combine(E1, E2, invert_second=False)


def baer_diff(E1: Extension, E2: Extension) -> Extension:
    return _combine(E1, E2, invert_second=True)


def baer_inverse(E: Extension) -> Extension:
    A = E.sub
    if not A.is_abelian:
        raise NotAbelian("Baer inverse needs an abelian kernel")
    return pushforward(E, GroupHom(A, A, A.inverse))
