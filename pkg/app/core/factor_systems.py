"""
Schreier factor systems and the complete enumeration of extensions of G by H.

A factor system is a lift L: G -> Aut(H) with L(1) = 1 plus a twist t: G x G -> H
such that L(g)L(h) = inn(t(g,h)) L(gh) and t(g,h) t(gh,k) = L(g)(t(h,k)) t(g,hk).
Every extension of G by H is isomorphic to the twisted product of one of them.

Enumeration runs per outer action: generators of G are sent to canonical
representatives of Out(H) cosets, L is spread along the spanning tree, and on
every remaining Cayley edge L(g)L(x)L(gx)^-1 must be inner. That fixes the
admissible values of the twist on each free edge. schreier_enumerate scans every
assignment, keeps the ones satisfying the twist identity and removes duplicates
with ext_isomorphism.

indexed_enumerate builds the same classes without a search: one valid twist times
the tree-normal 2-cocycles with values in Z(H), one per cohomology class.
cross_check_enumeration matches the two.
"""
import asyncio
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.core.cocycles import cohomology_representatives, fill_twist, free_edges, twisted_extension
from app.core.extensions import Extension, ext_isomorphism
from app.core.groups import (
    Action,
    FiniteGroup,
    Map,
    Table,
    automorphism_maps,
    center,
    compose_maps,
    inner_coset_representative,
    invert_map,
    spanning_tree,
)
from app.errors import BoundExceeded, MalformedTable, ViolationFound

logger = logging.getLogger(__name__)


def factor_system_defect(G: FiniteGroup, H: FiniteGroup, lift: Sequence[Map], twist: Table) -> Optional[str]:
    """Describe the first failed factor-system condition, or None."""
    n = G.order
    e, ident = G.identity, tuple(H.elements())
    if lift[e] != ident:
        return "lift(1) is not the identity"
    if any(twist[e][g] != H.identity or twist[g][e] != H.identity for g in G.elements()):
        return "twist is not normalized"
    for g in G.elements():
        for h in G.elements():
            t = twist[g][h]
            inn = tuple(H.conj(t, b) for b in H.elements())
            if compose_maps(lift[h], lift[g]) != compose_maps(lift[G.cayley[g][h]], inn):
                return f"lift(g)lift(h) != inn(t(g,h))lift(gh) at ({g}, {h})"
    L = np.asarray(lift, dtype=np.int64)
    T = np.asarray(twist, dtype=np.int64)
    Gt, Ht = G.table, H.table
    i = np.arange(n)
    lhs = Ht[T[:, :, None], T[Gt[:, :, None], i[None, None, :]]]
    rhs = Ht[L[i[:, None, None], T[None, :, :]], T[i[:, None, None], Gt[None, :, :]]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        g, h, k = (int(v) for v in bad[0])
        return f"twist identity fails at ({g}, {h}, {k})"
    return None


@dataclass(frozen=True)
class FactorSystem:
    group: FiniteGroup
    kernel: FiniteGroup
    lift: Tuple[Map, ...]
    twist: Table

    def __post_init__(self) -> None:
        G, H = self.group, self.kernel
        if len(self.lift) != G.order or any(len(m) != H.order for m in self.lift):
            raise MalformedTable("lift table has the wrong shape")
        if len(self.twist) != G.order or any(len(r) != G.order for r in self.twist):
            raise MalformedTable("twist table has the wrong shape")
        auts = set(automorphism_maps(H))
        if any(m not in auts for m in self.lift):
            raise MalformedTable("lift values must be automorphisms of the kernel")
        defect = factor_system_defect(G, H, self.lift, self.twist)
        if defect is not None:
            raise MalformedTable(defect)

    def extension(self) -> Extension:
        return twisted_extension(self.group, self.kernel, self.lift, self.twist)


def extension_from_factor_system(fs: FactorSystem) -> Extension:
    return fs.extension()


# OUTER ACTIONS
# -------------

@lru_cache(maxsize=256)
def _inner_preimages(H: FiniteGroup) -> Dict[Map, Tuple[int, ...]]:
    out: Dict[Map, List[int]] = {}
    for h in H.elements():
        out.setdefault(tuple(H.conj(h, b) for b in H.elements()), []).append(h)
    return {m: tuple(hs) for m, hs in out.items()}


@lru_cache(maxsize=256)
def outer_representatives(H: FiniteGroup) -> Tuple[Map, ...]:
    """The least automorphism in each coset of Inn(H), sorted."""
    return tuple(sorted({inner_coset_representative(H, a) for a in automorphism_maps(H)}))


class OuterLift(NamedTuple):
    """A lift of one outer action G -> Out(H), with the admissible twist values per free edge."""

    group: FiniteGroup
    kernel: FiniteGroup
    lift: Tuple[Map, ...]
    candidates: Dict[Tuple[int, int], Tuple[int, ...]]


def outer_action_lifts(G: FiniteGroup, H: FiniteGroup) -> List[OuterLift]:
    """One lift per homomorphism G -> Out(H), in the order of generator images."""
    tree = spanning_tree(G)
    pre = _inner_preimages(H)
    ident = tuple(H.elements())
    edges = free_edges(G)
    found = []
    for choice in itertools.product(outer_representatives(H), repeat=len(tree.gens)):
        at_gen = dict(zip(tree.gens, choice))
        L: List[Map] = [ident] * G.order
        for y in tree.order[1:]:
            p, x = tree.parent[y]
            L[y] = compose_maps(at_gen[x], L[p])
        candidates = {}
        for g, x in edges:
            # L(g) L(x) L(gx)^-1 has to be inner
            R = compose_maps(invert_map(L[G.cayley[g][x]]), compose_maps(at_gen[x], L[g]))
            if R not in pre:
                break
            candidates[(g, x)] = pre[R]
        else:
            found.append(OuterLift(G, H, tuple(L), candidates))
    logger.debug("%d outer actions of %r on %r", len(found), G, H)
    return found


def base_twist(ol: OuterLift) -> Optional[Table]:
    """Some tree-normal twist completing the lift to a factor system, or None if obstructed."""
    G, H = ol.group, ol.kernel
    if H.is_abelian:
        t = fill_twist(G, H, ol.lift, {})
        return t if factor_system_defect(G, H, ol.lift, t) is None else None
    edges = list(ol.candidates)
    space = 1
    for edge in edges:
        space *= len(ol.candidates[edge])
    if space > settings.search_limit:
        raise BoundExceeded(f"twist search space {space} exceeds search_limit")
    for values in itertools.product(*(ol.candidates[edge] for edge in edges)):
        t = fill_twist(G, H, ol.lift, dict(zip(edges, values)))
        if factor_system_defect(G, H, ol.lift, t) is None:
            return t
    return None


def center_action_of_lift(ol: OuterLift) -> Tuple[Action, Map]:
    """The action of G on Z(H) through the lift, and the embedding Z(H) -> H."""
    Zs = center(ol.kernel)
    Z, emb = Zs.as_group()
    pos = Zs.position
    rows = tuple(tuple(pos[ol.lift[g][emb.map[z]]] for z in Z.elements()) for g in ol.group.elements())
    return Action(ol.group, Z, rows), emb.map


def twist_space(ol: OuterLift) -> int:
    """Number of free-edge assignments for this lift."""
    space = 1
    for values in ol.candidates.values():
        space *= len(values)
    return space


def _zero_twist(G: FiniteGroup, H: FiniteGroup) -> Table:
    return tuple((H.identity,) * G.order for _ in G.elements())


# EXHAUSTIVE SEARCH
# -----------------

# cells of one |G|^3 batch held in memory at a time
_BATCH_CELLS = 1 << 20


def _twist_batch(ol: OuterLift, values: np.ndarray) -> np.ndarray:
    """Tree-normal twists for a batch of free-edge assignments, shape (rows, |G|, |G|)."""
    G, H = ol.group, ol.kernel
    tree = spanning_tree(G)
    Ht = H.table
    inv = np.asarray(H.inverse, dtype=np.int64)
    L = np.asarray(ol.lift, dtype=np.int64)
    T = np.full((values.shape[0], G.order, G.order), H.identity, dtype=np.int64)
    for k, (g, x) in enumerate(ol.candidates):
        T[:, g, x] = values[:, k]
    for g in G.elements():
        for y in tree.order[1:]:
            p, x = tree.parent[y]
            if p == G.identity:
                continue
            T[:, g, y] = Ht[Ht[inv[L[g][T[:, p, x]]], T[:, g, p]], T[:, G.cayley[g][p], x]]
    return T


def _twist_identity_holds(ol: OuterLift, T: np.ndarray) -> np.ndarray:
    # t(g,h) t(gh,k) == L(g)(t(h,k)) t(g,hk) for every (g, h, k), per batch row
    G, H = ol.group, ol.kernel
    Gt, Ht = G.table, H.table
    L = np.asarray(ol.lift, dtype=np.int64)
    i = np.arange(G.order)
    lhs = Ht[T[:, :, :, None], T[:, Gt[:, :, None], i[None, None, :]]]
    rhs = Ht[L[i[:, None, None], T[:, None, :, :]], T[:, i[:, None, None], Gt[None, :, :]]]
    return np.all((lhs == rhs).reshape(T.shape[0], -1), axis=1)


def admissible_twists(ol: OuterLift) -> List[Table]:
    """Every tree-normal twist over the candidate values that satisfies the twist identity.

    The whole candidate space is scanned in numpy batches; nothing here relies on
    cohomology. Sorted with the identity twist first.
    """
    G, H = ol.group, ol.kernel
    space = twist_space(ol)
    if space > settings.search_limit:
        raise BoundExceeded(f"twist search space {space} exceeds search_limit")
    sizes = [len(v) for v in ol.candidates.values()]
    cands = [np.asarray(v, dtype=np.int64) for v in ol.candidates.values()]
    step = max(1, _BATCH_CELLS // G.order ** 3)
    found: List[Table] = []
    for start in range(0, space, step):
        idx = np.arange(start, min(space, start + step), dtype=np.int64)
        values = np.empty((idx.size, len(sizes)), dtype=np.int64)
        for k in reversed(range(len(sizes))):
            idx, digit = np.divmod(idx, sizes[k])
            values[:, k] = cands[k][digit]
        T = _twist_batch(ol, values)
        found.extend(tuple(tuple(r) for r in row) for row in T[_twist_identity_holds(ol, T)].tolist())
    logger.debug("%d admissible twists out of %d for one lift of %r on %r", len(found), space, G, H)
    zero = _zero_twist(G, H)
    return sorted(found, key=lambda t: (t != zero, t))


def admissible_factor_systems(ol: OuterLift) -> List[FactorSystem]:
    """Every tree-normal factor system with this lift, each fully validated."""
    out = []
    for twist in admissible_twists(ol):
        try:
            out.append(FactorSystem(ol.group, ol.kernel, ol.lift, twist))
        except MalformedTable:
            continue
    return out


def distinct_extensions(systems: Iterable[FactorSystem]) -> List[Extension]:
    """The extensions of the given factor systems, first of each isomorphism class kept."""
    reps: List[Extension] = []
    for fs in systems:
        E = fs.extension()
        if all(ext_isomorphism(R, E) is None for R in reps):
            reps.append(E)
    return reps


def factor_systems(G: FiniteGroup, H: FiniteGroup) -> Iterator[FactorSystem]:
    for ol in outer_action_lifts(G, H):
        yield from admissible_factor_systems(ol)


# COHOMOLOGY-INDEXED CONSTRUCTION
# -------------------------------

def indexed_factor_systems(ol: OuterLift) -> List[FactorSystem]:
    """One base twist times one Z(H)-valued cocycle per class of H^2(G, Z(H))."""
    G, H = ol.group, ol.kernel
    t0 = base_twist(ol)
    if t0 is None:
        return []
    zaction, emb = center_action_of_lift(ol)
    out = []
    for z in cohomology_representatives(zaction):
        twist = tuple(
            tuple(H.cayley[t0[g][h]][emb[z[g][h]]] for h in G.elements()) for g in G.elements()
        )
        out.append(FactorSystem(G, H, ol.lift, twist))
    return out


# ENUMERATION
# -----------

def check_bound(G: FiniteGroup, H: FiniteGroup, bound: Optional[int] = None) -> int:
    bound = settings.default_bound if bound is None else bound
    if bound > settings.max_bound:
        raise BoundExceeded(f"bound {bound} exceeds the supported maximum {settings.max_bound}")
    if G.order * H.order > bound:
        raise BoundExceeded(f"|G|*|H| = {G.order * H.order} exceeds bound {bound}")
    return bound


def _extensions_for_lift(ol: OuterLift) -> List[Extension]:
    # extensions with different lifts never share an isomorphism class
    return distinct_extensions(admissible_factor_systems(ol))


def schreier_enumerate(G: FiniteGroup, H: FiniteGroup, bound: Optional[int] = None) -> List[Extension]:
    """Every extension of G by H up to isomorphism of extensions, grouped by outer action."""
    check_bound(G, H, bound)
    out: List[Extension] = []
    for ol in outer_action_lifts(G, H):
        out.extend(_extensions_for_lift(ol))
    logger.info("enumerated %d extensions of %r by %r", len(out), G, H)
    return out


async def schreier_enumerate_async(G: FiniteGroup, H: FiniteGroup, bound: Optional[int] = None) -> List[Extension]:
    """Same result as schreier_enumerate, one worker shard per outer action."""
    check_bound(G, H, bound)
    sem = asyncio.Semaphore(max(1, settings.workers))

    async def shard(ol: OuterLift) -> List[Extension]:
        async with sem:
            return await asyncio.to_thread(_extensions_for_lift, ol)

    shards = await asyncio.gather(*(shard(ol) for ol in outer_action_lifts(G, H)))
    out = [E for part in shards for E in part]
    logger.info("enumerated %d extensions of %r by %r in %d shards", len(out), G, H, len(shards))
    return out


def indexed_enumerate(G: FiniteGroup, H: FiniteGroup, bound: Optional[int] = None) -> List[Extension]:
    """The extensions built from H^2(G, Z(H)) per outer action, without any search over twists."""
    check_bound(G, H, bound)
    return [fs.extension() for ol in outer_action_lifts(G, H) for fs in indexed_factor_systems(ol)]


def cross_check_enumeration(G: FiniteGroup, H: FiniteGroup, bound: Optional[int] = None) -> List[Extension]:
    """schreier_enumerate, matched class for class against indexed_enumerate.

    Raises ViolationFound unless the two lists are in bijection under ext_isomorphism.
    """
    full = schreier_enumerate(G, H, bound)
    fast = indexed_enumerate(G, H, bound)
    matched: Dict[int, int] = {}
    for i, E in enumerate(fast):
        taken = set(matched.values())
        j = next((j for j, F in enumerate(full) if j not in taken and ext_isomorphism(F, E) is not None), None)
        if j is None:
            raise ViolationFound(
                f"indexed extension {i} of {G!r} by {H!r} has no partner in the exhaustive enumeration",
                counterexample={"kind": "unmatched", "indexed": i, "exhaustive": len(full), "total": len(fast)},
            )
        matched[i] = j
    if len(matched) != len(full):
        missing = sorted(set(range(len(full))) - set(matched.values()))
        raise ViolationFound(
            f"{len(full)} exhaustive classes against {len(fast)} indexed ones for {G!r} by {H!r}",
            counterexample={"kind": "count", "exhaustive": len(full), "indexed": len(fast), "missing": missing},
        )
    return full
