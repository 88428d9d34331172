"""
When do two extensions of G by H induce the same outer action?

Three readings are implemented and cross-checked:
- an isomorphism of the quotient extensions E1/Z -> E2/Z that is compatible with
  the conjugation actions of E1/Z and E2/Z on H (the relative definition),
- normality of the diagonal copy of H in E1 x_{E0} E2,
- equality of the classical outer action G -> Out(H).
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Optional, Tuple

from app.core.cocycles import aut_extension
from app.core.extensions import (
    Extension,
    ExtIso,
    ext_isomorphism,
    fiber_product,
    kernel_action,
    pushforward_with_map,
)
from app.core.groups import (
    Action,
    FiniteGroup,
    GroupHom,
    Map,
    Subgroup,
    aut_group,
    center,
    compose,
    inner_coset_representative,
    is_normal,
    out_group,
    quotient,
)
from app.errors import SignatureMismatch

logger = logging.getLogger(__name__)


class CenterQuotient(NamedTuple):
    extension: Extension
    sub_projection: GroupHom
    total_projection: GroupHom


@lru_cache(maxsize=1024)
def center_quotient(E: Extension) -> CenterQuotient:
    """E0 = E/Z as an extension of G by H/Z, with the maps H -> H/Z and E -> E0."""
    Q = quotient(E.sub, center(E.sub))
    E0, to_e0 = pushforward_with_map(E, Q.projection)
    return CenterQuotient(E0, Q.projection, to_e0)


def quotient_by_center(E: Extension) -> Extension:
    return center_quotient(E).extension


@lru_cache(maxsize=1024)
def quotient_action(E: Extension) -> Action:
    """The conjugation action of E/Z on H."""
    cq = center_quotient(E)
    act = kernel_action(E).table
    rows = [None] * cq.extension.total.order
    for x, y in enumerate(cq.total_projection.map):
        if rows[y] is None:
            rows[y] = act[x]
    return Action(cq.extension.total, E.sub, tuple(rows))


@dataclass(frozen=True)
class OuterWitness:
    """An identification E1/Z -> E2/Z and whether it transports the actions on H."""

    e0_iso: ExtIso
    action_check: bool


def is_action_compatible(E1: Extension, E2: Extension, iso: ExtIso) -> bool:
    a1, a2 = quotient_action(E1), quotient_action(E2)
    f = iso.map.map
    return all(a2.table[f[y]] == a1.table[y] for y in range(len(f)))


def make_witness(E1: Extension, E2: Extension, iso: ExtIso) -> OuterWitness:
    return OuterWitness(iso, is_action_compatible(E1, E2, iso))


def _check_signature(E1: Extension, E2: Extension) -> None:
    if E1.sub != E2.sub or E1.quot != E2.quot:
        raise SignatureMismatch("extensions must share the kernel and quotient groups")


def identifications(E1: Extension, E2: Extension) -> List[ExtIso]:
    """Every isomorphism E1/Z -> E2/Z: one of them composed with all of Aut(E2/Z)."""
    _check_signature(E1, E2)
    Q1, Q2 = quotient_by_center(E1), quotient_by_center(E2)
    first = ext_isomorphism(Q1, Q2)
    if first is None:
        return []
    return [first.compose(a) for a in aut_extension(Q2)]


def outer_witnesses(E1: Extension, E2: Extension) -> List[OuterWitness]:
    """All action-compatible identifications; their number is the witness multiplicity."""
    return [w for w in (make_witness(E1, E2, iso) for iso in identifications(E1, E2)) if w.action_check]


def same_outer_action(E1: Extension, E2: Extension) -> Optional[OuterWitness]:
    for iso in identifications(E1, E2):
        w = make_witness(E1, E2, iso)
        if w.action_check:
            return w
    return None


class RelativeProduct(NamedTuple):
    """E1 x_{E0} E2 along q1 and w^-1 q2, with the diagonal copy of H."""

    group: FiniteGroup
    p1: GroupHom
    diagonal: Subgroup
    element: dict


def relative_product(E1: Extension, E2: Extension, iso: ExtIso) -> RelativeProduct:
    q1 = center_quotient(E1).total_projection
    q2 = center_quotient(E2).total_projection
    fp = fiber_product(q1, compose(q2, iso.map.inverse()))
    diag = tuple(sorted(fp.element(E1.incl.map[h], E2.incl.map[h]) for h in E1.sub.elements()))
    return RelativeProduct(fp.group, fp.p1, Subgroup(fp.group, diag), fp.pair_index)


def delta_normality_test(E1: Extension, E2: Extension, w: OuterWitness) -> bool:
    """Is the diagonal copy of H normal in E1 x_{E0} E2 for the identification in w?"""
    return is_normal(relative_product(E1, E2, w.e0_iso).diagonal)


# CLASSICAL OUTER ACTION
# ----------------------

def kappa_maps(E: Extension) -> Tuple[Map, ...]:
    """For each g, the canonical Out(H) representative of conjugation by a lift of g."""
    act = kernel_action(E).table
    return tuple(inner_coset_representative(E.sub, act[E.set_section[g]]) for g in E.quot.elements())


def classical_kappa(E: Extension) -> GroupHom:
    """G -> Out(H), conjugation by a lift of g taken to its class in out_group(H)."""
    auts, out = aut_group(E.sub), out_group(E.sub)
    act = kernel_action(E).table
    images = (out.projection.map[auts.index_of(act[E.set_section[g]])] for g in E.quot.elements())
    return GroupHom(E.quot, out.group, tuple(images))
