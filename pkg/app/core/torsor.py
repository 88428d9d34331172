"""
Ext(G, Z, E) acting on Ext(G, H, E).

act(E, E') pushes the fiber product E x_G E' forward along H x Z -> H, and
diff(E1, E2, w) recovers the class connecting two extensions with the same
outer action from E1 x_{E0} E2. verify_simply_transitive checks the action
table of a whole outer class exhaustively.
"""
import asyncio
import logging
from typing import List, NamedTuple, Optional, Sequence, Tuple

from app.config import settings
from app.core.cocycles import TwoCocycle, baer_sum, cohomology_representatives, extension_from_cocycle
from app.core.extensions import (
    CenterData,
    Extension,
    center_data,
    ext_isomorphism,
    extension_fiber_product,
    fiber_product,
    induced_action,
    pushforward,
    relabel,
)
from app.core.groups import Action, GroupHom, compose
from app.core.outer import OuterWitness, center_quotient, outer_witnesses, same_outer_action
from app.errors import ActionMismatch, KernelNotNormalInE, SignatureMismatch, ViolationFound
from app.schemas import TorsorReport

logger = logging.getLogger(__name__)


def center_action(E: Extension) -> Action:
    return center_data(E).action


def induced_action_on_center(E: Extension) -> GroupHom:
    """G -> Aut(Z) for Z the center of the kernel."""
    return center_action(E).as_hom()


def _check_coefficients(E: Extension, Ep: Extension) -> CenterData:
    cz = center_data(E)
    if Ep.sub != cz.group or Ep.quot != E.quot:
        raise SignatureMismatch("E' must be an extension of the same G by the center of H")
    if induced_action(Ep).table != cz.action.table:
        raise ActionMismatch("E' induces a different action of G on the center")
    return cz


def act(E: Extension, Ep: Extension) -> Extension:
    """[E'] . [E] = mu_*(E x_G E') with mu(h, z) = h z."""
    cz = _check_coefficients(E, Ep)
    fp = extension_fiber_product(E, Ep)
    H, n = E.sub, cz.group.order
    K = fp.kernel.group
    mu = GroupHom(K, H, tuple(H.cayley[z // n][cz.into_sub.map[z % n]] for z in K.elements()))
    try:
        return pushforward(fp.extension, mu)
    except KernelNotNormalInE as exc:
        raise ViolationFound("kernel of H x Z -> H is not normal in E x_G E'") from exc


def diff(E1: Extension, E2: Extension, w: OuterWitness) -> Extension:
    """The class E' with act(E1, E') = E2, read off E1 x_{E0} E2 along (h1, h2) -> h1^-1 h2."""
    if E1.sub != E2.sub or E1.quot != E2.quot:
        raise SignatureMismatch("extensions must share the kernel and quotient groups")
    if not w.action_check:
        raise ActionMismatch("the identification does not transport the actions on H")
    c1, c2 = center_quotient(E1), center_quotient(E2)
    fp = fiber_product(c1.total_projection, compose(c2.total_projection, w.e0_iso.map.inverse()))
    pi = c1.sub_projection
    K = fiber_product(pi, pi)
    pairs = list(zip(K.p1.map, K.p2.map))
    incl = GroupHom(K.group, fp.group, tuple(fp.element(E1.incl.map[a], E2.incl.map[b]) for a, b in pairs))
    E12 = Extension(K.group, fp.group, E1.quot, incl, compose(fp.p1, E1.proj))

    cz = center_data(E1)
    H = E1.sub
    zpos = {h: z for z, h in enumerate(cz.into_sub.map)}
    nabla = GroupHom(K.group, cz.group, tuple(zpos[H.cayley[H.inverse[a]][b]] for a, b in pairs))
    return pushforward(E12, nabla)


def zgroup_classes(E: Extension) -> List[Extension]:
    """One extension of G by Z per class in Ext(G, Z, E); the split class comes first."""
    action = center_action(E)
    return [extension_from_cocycle(TwoCocycle(action, t)) for t in cohomology_representatives(action)]


def find_class(classes: Sequence[Extension], E: Extension) -> Optional[int]:
    for k, C in enumerate(classes):
        if ext_isomorphism(C, E) is not None:
            return k
    return None


class ExtClassSet(NamedTuple):
    base: Extension
    members: List[Extension]
    zgroup: List[Extension]
    witness_counts: List[int]


def build_class_set(base: Extension, candidates: Sequence[Extension]) -> ExtClassSet:
    """The candidates inducing the same outer action as base, one per isomorphism class."""
    members: List[Extension] = []
    counts: List[int] = []
    for E in candidates:
        if E.sub != base.sub or E.quot != base.quot:
            continue
        ws = outer_witnesses(base, E)
        if not ws or find_class(members, E) is not None:
            continue
        members.append(E)
        counts.append(len(ws))
    return ExtClassSet(base, members, zgroup_classes(base), counts)


def act_compatibility_check(E: Extension, Z1: Extension, Z2: Extension) -> bool:
    """act(act(E, Z1), Z2) and act(E, Z1 + Z2) are isomorphic."""
    return ext_isomorphism(act(act(E, Z1), Z2), act(E, baer_sum(Z1, Z2))) is not None


# VERIFICATION
# ------------

class _Row(NamedTuple):
    classes: List[int]
    round_trips: int
    counterexample: Optional[dict]
    witnesses: int = 0


def _reversed_copy(E: Extension) -> Extension:
    n = E.total.order
    return relabel(E, [n - 1 - x for x in range(n)])[0]


def _verify_row(S: ExtClassSet, i: int) -> _Row:
    E = S.members[i]
    classes: List[int] = []
    copy = _reversed_copy(E)
    for j, Zp in enumerate(S.zgroup):
        k = find_class(S.members, act(E, Zp))
        if k is None:
            return _Row(classes, 0, {"kind": "outside", "member": i, "zclass": j})
        if find_class(S.members, act(copy, Zp)) != k or find_class(S.members, act(E, _reversed_copy(Zp))) != k:
            return _Row(classes, 0, {"kind": "not_well_defined", "member": i, "zclass": j})
        classes.append(k)

    trips = witnesses = 0
    for k, E2 in enumerate(S.members):
        ws = outer_witnesses(E, E2)
        if not ws:
            return _Row(classes, trips, {"kind": "no_witness", "member": i, "other": k}, witnesses)
        D = diff(E, E2, ws[0])
        for n, w in enumerate(ws[1:], start=1):
            if ext_isomorphism(diff(E, E2, w), D) is None:
                cex = {"kind": "witness_dependent", "member": i, "other": k, "witness": n}
                return _Row(classes, trips, cex, witnesses)
        witnesses += len(ws)
        if ext_isomorphism(act(E, D), E2) is None:
            return _Row(classes, trips, {"kind": "act_diff", "member": i, "other": k}, witnesses)
        trips += 1
    for j, Zp in enumerate(S.zgroup):
        E2 = act(E, Zp)
        w = same_outer_action(E, E2)
        if w is None or ext_isomorphism(diff(E, E2, w), Zp) is None:
            return _Row(classes, trips, {"kind": "diff_act", "member": i, "zclass": j}, witnesses)
        trips += 1
    return _Row(classes, trips, None, witnesses)


def _assemble(S: ExtClassSet, rows: Sequence[_Row]) -> TorsorReport:
    n, m = len(S.members), len(S.zgroup)
    counterexample = next((r.counterexample for r in rows if r.counterexample), None)
    table = [r.classes for r in rows]
    complete = counterexample is None
    transitive = complete and all(set(row) == set(range(n)) for row in table)
    free = complete and all((row[j] == i) == (j == 0) for i, row in enumerate(table) for j in range(m))
    if complete and not transitive:
        i = next(i for i, row in enumerate(table) if set(row) != set(range(n)))
        counterexample = {"kind": "not_transitive", "member": i, "reached": sorted(set(table[i]))}
    elif complete and not free:
        i, j = next((i, j) for i, row in enumerate(table) for j in range(m) if (row[j] == i) != (j == 0))
        counterexample = {"kind": "not_free", "member": i, "zclass": j}
    report = TorsorReport(
        members=n,
        zgroup_order=m,
        pairs_checked=sum(len(r.classes) for r in rows),
        action_table=table,
        well_defined=complete,
        free=free,
        transitive=transitive,
        round_trips_checked=sum(r.round_trips for r in rows),
        witnesses_checked=sum(r.witnesses for r in rows),
        counterexample=counterexample,
    )
    if counterexample is not None or n != m:
        raise ViolationFound(
            f"Ext(G,Z,E) of order {m} does not act simply transitively on {n} classes",
            report=report,
            counterexample=counterexample or {"kind": "count", "members": n, "zgroup": m},
        )
    return report


def verify_simply_transitive(S: ExtClassSet) -> TorsorReport:
    rows = [_verify_row(S, i) for i in range(len(S.members))]
    return _assemble(S, rows)


async def verify_simply_transitive_async(S: ExtClassSet) -> TorsorReport:
    """Rows of the action table in worker threads, aggregated in member order."""
    sem = asyncio.Semaphore(max(1, settings.workers))

    async def row(i: int) -> _Row:
        async with sem:
            return await asyncio.to_thread(_verify_row, S, i)

    rows: Tuple[_Row, ...] = tuple(await asyncio.gather(*(row(i) for i in range(len(S.members)))))
    return _assemble(S, rows)
