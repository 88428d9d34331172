"""
Split extensions inside an outer class.

Sections s of E0 = E/Z give extensions E_s of G by Z (pull E back along s); up
to conjugacy they are classified by crossed morphisms into H/Z relative to a
base section s0. delta([s]) = [E_s] and delta_E([s]) = (-[E_s]) . [E]; the
split classes of the outer class are exactly the image of delta_E.
"""
import logging
from typing import List, Optional, Tuple

from app.core.cocycles import CrossedMorphism, H1Classes, baer_inverse, h1_coc
from app.core.extensions import Extension, center_data, find_section, is_split, pullback
from app.core.groups import Action, GroupHom, Map, compose
from app.core.outer import center_quotient
from app.core.torsor import ExtClassSet, act, find_class
from app.errors import NotASection, QuotientNotSplit, ViolationFound
from app.schemas import SplitLocusReport

logger = logging.getLogger(__name__)


def _check_section(E: Extension, s: GroupHom) -> None:
    if s.domain != E.quot or s.codomain != E.total:
        raise NotASection("section must map the quotient group into the total group")
    if compose(s, E.proj).map != tuple(E.quot.elements()):
        raise NotASection("proj o s is not the identity")


def center_extension(E: Extension) -> Extension:
    """E seen as an extension of E0 = E/Z by Z."""
    cz = center_data(E)
    cq = center_quotient(E)
    return Extension(cz.group, E.total, cq.extension.total, cz.into_total, cq.total_projection)


def delta_map(E: Extension, s: GroupHom) -> Extension:
    """E_s: the pullback of Z -> E -> E0 along a section s: G -> E0."""
    _check_section(center_quotient(E).extension, s)
    return pullback(center_extension(E), s)


# SECTIONS AS CROSSED MORPHISMS
# -----------------------------

def section_action(E: Extension, s0: GroupHom) -> Action:
    """The G-group structure on the kernel given by conjugation through s0."""
    _check_section(E, s0)
    T, r = E.total, E.restrict
    rows = tuple(
        tuple(r[T.conj(s0.map[g], E.incl.map[x])] for x in E.sub.elements()) for g in E.quot.elements()
    )
    return Action(E.quot, E.sub, rows)


def section_from_crossed(E: Extension, s0: GroupHom, a: Map) -> GroupHom:
    """g -> a(g) s0(g)"""
    T = E.total
    return GroupHom(E.quot, T, tuple(T.cayley[E.incl.map[a[g]]][s0.map[g]] for g in E.quot.elements()))


def crossed_from_section(E: Extension, s0: GroupHom, s: GroupHom) -> CrossedMorphism:
    _check_section(E, s)
    T, r = E.total, E.restrict
    a = tuple(r[T.cayley[s.map[g]][T.inverse[s0.map[g]]]] for g in E.quot.elements())
    return CrossedMorphism(section_action(E, s0), a)


def twist_crossed_morphism(E: Extension, s0: GroupHom, s1: GroupHom, a: Map) -> CrossedMorphism:
    """The crossed morphism relative to s1 describing the same section as a does relative to s0."""
    return crossed_from_section(E, s1, section_from_crossed(E, s0, a))


def section_classes(E: Extension) -> Tuple[GroupHom, H1Classes, List[GroupHom]]:
    """Base section s0 of E/Z, H^1 relative to it, and one section per class."""
    E0 = center_quotient(E).extension
    s0 = find_section(E0)
    if s0 is None:
        raise QuotientNotSplit("E/Z is not split as an extension of G by H/Z")
    h1 = h1_coc(section_action(E0, s0))
    reps = [section_from_crossed(E0, s0, h1.cocycles[c[0]].map) for c in h1.classes]
    return s0, h1, reps


def delta_E_map(E: Extension, s: GroupHom) -> Extension:
    """(-[E_s]) . [E]"""
    if not is_split(center_quotient(E).extension):
        raise QuotientNotSplit("delta_E needs E/Z to be split")
    return act(E, baer_inverse(delta_map(E, s)))


def delta_E_image(E: Extension, classes: List[Extension]) -> List[int]:
    _, _, reps = section_classes(E)
    out = set()
    for s in reps:
        k = find_class(classes, delta_E_map(E, s))
        if k is None:
            raise ViolationFound("delta_E lands outside the outer class", counterexample={"section": list(s.map)})
        out.add(k)
    return sorted(out)


# SPLIT LOCUS
# -----------

def _exactness(S: ExtClassSet, split_members: List[int]) -> Tuple[bool, bool]:
    B = S.members[split_members[0]]
    sigma = find_section(B)
    assert sigma is not None
    cq = center_quotient(B)
    E0 = cq.extension
    s0 = compose(sigma, cq.total_projection)

    T, r = B.total, B.restrict
    on_h = Action(
        B.quot,
        B.sub,
        tuple(tuple(r[T.conj(sigma.map[g], B.incl.map[h])] for h in B.sub.elements()) for g in B.quot.elements()),
    )
    h1_h = h1_coc(on_h)
    h1_q = h1_coc(section_action(E0, s0))
    q = cq.sub_projection.map
    image_j = {h1_q.class_of(tuple(q[x] for x in h1_h.cocycles[c[0]].map)) for c in h1_h.classes}

    delta = []
    for c in h1_q.classes:
        s = section_from_crossed(E0, s0, h1_q.cocycles[c[0]].map)
        delta.append(find_class(S.zgroup, delta_map(B, s)))
    kernel_delta = {i for i, k in enumerate(delta) if k == 0}

    split = set(split_members)
    to_split = {j for j, Zp in enumerate(S.zgroup) if find_class(S.members, act(B, baer_inverse(Zp))) in split}
    return image_j == kernel_delta, set(delta) == to_split


def split_locus_check(S: ExtClassSet) -> SplitLocusReport:
    """Split classes against the image of delta_E, computed from every member of the class."""
    members = S.members
    split_members = [i for i, E in enumerate(members) if is_split(E)]
    quotient_split = is_split(center_quotient(S.base).extension)

    delta_image: List[int] = []
    independent = True
    if quotient_split:
        images = [delta_E_image(E, members) for E in [S.base, *members]]
        delta_image = images[0]
        independent = all(img == delta_image for img in images)

    exact_h1: Optional[bool] = None
    exact_ext: Optional[bool] = None
    if split_members:
        exact_h1, exact_ext = _exactness(S, split_members)

    counterexample = None
    if delta_image != split_members:
        counterexample = {"kind": "split_locus", "split": split_members, "delta_image": delta_image}
    elif not independent:
        counterexample = {"kind": "delta_depends_on_base"}
    elif bool(split_members) != quotient_split:
        counterexample = {"kind": "quotient_criterion", "quotient_split": quotient_split}
    elif exact_h1 is False or exact_ext is False:
        counterexample = {"kind": "not_exact", "at_h1": exact_h1, "at_ext": exact_ext}

    report = SplitLocusReport(
        split_members=split_members,
        delta_image=delta_image,
        delta_image_independent=independent,
        quotient_split=quotient_split,
        nonempty_iff_quotient_split=bool(split_members) == quotient_split,
        exact_at_h1=exact_h1,
        exact_at_ext=exact_ext,
        counterexample=counterexample,
    )
    if counterexample is not None:
        raise ViolationFound("split locus check failed", report=report, counterexample=counterexample)
    logger.debug("split locus %s", split_members)
    return report
