"""
Extensions 1 -> H -> E -> G -> 1 and the constructions on them: fiber products,
pullbacks, pushforwards, sections and isomorphisms of extensions.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from app.core.groups import (
    Action,
    DirectProduct,
    FiniteGroup,
    GroupHom,
    Map,
    Subgroup,
    center,
    compose,
    direct_product,
    extend_hom,
    generating_set,
    identity_hom,
    image,
    is_normal,
    kernel,
    make_group,
    permuted,
    quotient,
)
from app.errors import (
    CodomainMismatch,
    DoesNotFactor,
    DomainMismatch,
    KernelNotNormalInE,
    NotExact,
    NotInjective,
    NotNormal,
    NotSurjective,
    SignatureMismatch,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Extension:
    sub: FiniteGroup
    total: FiniteGroup
    quot: FiniteGroup
    incl: GroupHom
    proj: GroupHom

    def __post_init__(self) -> None:
        if self.incl.domain != self.sub or self.incl.codomain != self.total:
            raise DomainMismatch("incl must map sub -> total")
        if self.proj.domain != self.total or self.proj.codomain != self.quot:
            raise DomainMismatch("proj must map total -> quot")
        if not self.incl.is_injective:
            raise NotInjective("the inclusion H -> E is not injective")
        if not self.proj.is_surjective:
            raise NotSurjective("the projection E -> G is not surjective")
        if image(self.incl).elements != kernel(self.proj).elements:
            raise NotExact("image(incl) != kernel(proj)")
        if self.total.order != self.sub.order * self.quot.order:
            raise NotExact("|E| != |H|*|G|")

    def __repr__(self) -> str:
        return f"Extension({self.sub!r} -> {self.total!r} -> {self.quot!r})"

    @cached_property
    def sub_image(self) -> Subgroup:
        return image(self.incl)

    @cached_property
    def restrict(self) -> Dict[int, int]:
        """Inverse of incl on its image."""
        return {e: h for h, e in enumerate(self.incl.map)}

    @cached_property
    def fibers(self) -> Tuple[Map, ...]:
        out: List[List[int]] = [[] for _ in self.quot.elements()]
        for e, g in enumerate(self.proj.map):
            out[g].append(e)
        return tuple(tuple(f) for f in out)

    @cached_property
    def set_section(self) -> Map:
        """Least element of each fiber, with the identity over the identity."""
        s = [f[0] for f in self.fibers]
        s[self.quot.identity] = self.total.identity
        return tuple(s)

    @property
    def is_split(self) -> bool:
        return find_section(self) is not None


def make_extension(
    sub: FiniteGroup,
    total: FiniteGroup,
    quot: FiniteGroup,
    incl: GroupHom,
    proj: GroupHom,
) -> Extension:
    return Extension(sub, total, quot, incl, proj)


@dataclass(frozen=True)
class ExtIso:
    source: Extension
    target: Extension
    map: GroupHom

    def __post_init__(self) -> None:
        s, t, f = self.source, self.target, self.map
        if f.domain != s.total or f.codomain != t.total:
            raise DomainMismatch("isomorphism must map source total -> target total")
        if not f.is_bijective:
            raise NotInjective("extension isomorphism must be bijective")
        if compose(s.incl, f).map != t.incl.map:
            raise NotExact("isomorphism does not restrict to the identity on H")
        if compose(f, t.proj).map != s.proj.map:
            raise NotExact("isomorphism does not induce the identity on G")

    def compose(self, other: "ExtIso") -> "ExtIso":
        """other after self."""
        return ExtIso(self.source, other.target, compose(self.map, other.map))

    def inverse(self) -> "ExtIso":
        return ExtIso(self.target, self.source, self.map.inverse())


def identity_iso(E: Extension) -> ExtIso:
    return ExtIso(E, E, identity_hom(E.total))


# FIBER PRODUCTS
# --------------

class FiberProduct(NamedTuple):
    group: FiniteGroup
    p1: GroupHom
    p2: GroupHom
    pair_index: Dict[Tuple[int, int], int]

    def element(self, x: int, y: int) -> int:
        return self.pair_index[(x, y)]


def fiber_product(phi1: GroupHom, phi2: GroupHom) -> FiberProduct:
    """{(x, y) : phi1(x) = phi2(y)} inside G1 x G2, indexed in sorted pair order."""
    if phi1.codomain != phi2.codomain:
        raise CodomainMismatch("fiber product needs a common codomain")
    G1, G2 = phi1.domain, phi2.domain
    over: Dict[int, List[int]] = {}
    for y in G2.elements():
        over.setdefault(phi2.map[y], []).append(y)
    pairs = [(x, y) for x in G1.elements() for y in over.get(phi1.map[x], [])]
    index = {p: i for i, p in enumerate(pairs)}
    table = [
        [index[(G1.cayley[a][c], G2.cayley[b][d])] for (c, d) in pairs]
        for (a, b) in pairs
    ]
    P = make_group(table)
    p1 = GroupHom(P, G1, tuple(x for x, _ in pairs))
    p2 = GroupHom(P, G2, tuple(y for _, y in pairs))
    return FiberProduct(P, p1, p2, index)


class ExtFiberProduct(NamedTuple):
    extension: Extension
    fiber: FiberProduct
    kernel: DirectProduct


def extension_fiber_product(E1: Extension, E2: Extension) -> ExtFiberProduct:
    """E1 x_G E2 as an extension of G by H1 x H2."""
    if E1.quot != E2.quot:
        raise SignatureMismatch("extensions have different quotient groups")
    fp = fiber_product(E1.proj, E2.proj)
    dp = direct_product(E1.sub, E2.sub)
    n2 = E2.sub.order
    incl = GroupHom(
        dp.group,
        fp.group,
        tuple(fp.element(E1.incl.map[z // n2], E2.incl.map[z % n2]) for z in dp.group.elements()),
    )
    proj = compose(fp.p1, E1.proj)
    return ExtFiberProduct(Extension(dp.group, fp.group, E1.quot, incl, proj), fp, dp)


def pullback(E: Extension, f: GroupHom) -> Extension:
    if f.codomain != E.quot:
        raise CodomainMismatch("pullback map must land in the quotient of E")
    fp = fiber_product(E.proj, f)
    incl = GroupHom(E.sub, fp.group, tuple(fp.element(E.incl.map[h], f.domain.identity) for h in E.sub.elements()))
    out = Extension(E.sub, fp.group, f.domain, incl, fp.p2)
    assert compose(fp.p1, E.proj).map == compose(fp.p2, f).map
    return out


def pushforward_with_map(E: Extension, f: GroupHom) -> Tuple[Extension, GroupHom]:
    """f_*(E) = E / ker(f), with the quotient map E -> f_*(E)."""
    if f.domain != E.sub:
        raise DomainMismatch("pushforward map must start at the kernel group of E")
    if not f.is_surjective:
        raise NotSurjective("pushforward needs a surjective map")
    K = kernel(f)
    KE = Subgroup(E.total, tuple(sorted(E.incl.map[k] for k in K.elements)))
    if not is_normal(KE):
        raise KernelNotNormalInE(f"ker(f) of order {K.order} is not normal in E")
    Q = quotient(E.total, KE)
    preimage: Dict[int, int] = {}
    for h, y in enumerate(f.map):
        preimage.setdefault(y, h)
    H2 = f.codomain
    incl = GroupHom(H2, Q.group, tuple(Q.projection.map[E.incl.map[preimage[y]]] for y in H2.elements()))
    proj = GroupHom(Q.group, E.quot, tuple(E.proj.map[r] for r in Q.representatives))
    return Extension(H2, Q.group, E.quot, incl, proj), Q.projection


def pushforward(E: Extension, f: GroupHom) -> Extension:
    return pushforward_with_map(E, f)[0]


# SECTIONS AND ISOMORPHISMS
# -------------------------

def sections(E: Extension) -> Iterator[GroupHom]:
    """Every homomorphic section of proj, by generator images taken from the fibers."""
    gens = generating_set(E.quot)
    for images in itertools.product(*(E.fibers[x] for x in gens)):
        s = extend_hom(E.quot, gens, images, E.total)
        if s is not None:
            yield GroupHom(E.quot, E.total, s)


def find_section(E: Extension) -> Optional[GroupHom]:
    return next(sections(E), None)


def is_split(E: Extension) -> bool:
    return find_section(E) is not None


def ext_isomorphisms(E1: Extension, E2: Extension) -> Iterator[ExtIso]:
    if E1.sub != E2.sub or E1.quot != E2.quot:
        raise SignatureMismatch("extensions must share the kernel and quotient groups")
    h_gens = generating_set(E1.sub)
    g_gens = generating_set(E1.quot)
    gens = [E1.incl.map[h] for h in h_gens] + [E1.set_section[x] for x in g_gens]
    fixed = [E2.incl.map[h] for h in h_gens]
    for lifts in itertools.product(*(E2.fibers[x] for x in g_gens)):
        f = extend_hom(E1.total, gens, fixed + list(lifts), E2.total)
        if f is None or len(set(f)) != E2.total.order:
            continue
        yield ExtIso(E1, E2, GroupHom(E1.total, E2.total, f))


def ext_isomorphism(E1: Extension, E2: Extension) -> Optional[ExtIso]:
    return next(ext_isomorphisms(E1, E2), None)


def relabel(E: Extension, perm: Sequence[int]) -> Tuple[Extension, ExtIso]:
    """An isomorphic copy of E whose total group is relabelled by perm."""
    P, iso = permuted(E.total, perm)
    copy = Extension(E.sub, P, E.quot, compose(E.incl, iso), compose(iso.inverse(), E.proj))
    return copy, ExtIso(E, copy, iso)


# CONJUGATION
# -----------

def conjugation_table(E: Extension, N: Subgroup) -> Action:
    """Conjugation action of E.total on a normal subgroup N (re-indexed densely)."""
    if N.ambient != E.total:
        raise DomainMismatch("subgroup must live in the total group")
    if not is_normal(N):
        raise NotNormal("conjugation action needs a normal subgroup")
    Ngroup, _ = N.as_group()
    pos = N.position
    T = E.total
    return Action(T, Ngroup, tuple(tuple(pos[T.conj(e, n)] for n in N.elements) for e in T.elements()))


def conjugation_action(E: Extension, N: Subgroup) -> GroupHom:
    return conjugation_table(E, N).as_hom()


def factor_through_quotient(E: Extension, action: Action) -> Action:
    """The action of E.quot induced by an action of E.total that is trivial on the kernel."""
    if action.acting != E.total:
        raise DomainMismatch("action must be by the total group")
    rows = []
    for g, fiber in enumerate(E.fibers):
        row = action.table[fiber[0]]
        if any(action.table[e] != row for e in fiber[1:]):
            raise DoesNotFactor(f"conjugation differs along the fiber over {g}")
        rows.append(row)
    return Action(E.quot, action.module, tuple(rows))


@lru_cache(maxsize=1024)
def kernel_action(E: Extension) -> Action:
    """Conjugation action of E.total on H, transported to H's own indices."""
    T, r = E.total, E.restrict
    return Action(T, E.sub, tuple(tuple(r[T.conj(e, E.incl.map[h])] for h in E.sub.elements()) for e in T.elements()))


def induced_action(E: Extension) -> Action:
    """The action of G on H by conjugation through any lift; DoesNotFactor unless it is well defined."""
    return factor_through_quotient(E, kernel_action(E))


# CENTER OF THE KERNEL
# --------------------

class CenterData(NamedTuple):
    group: FiniteGroup
    into_sub: GroupHom
    into_total: GroupHom
    action: Action


@lru_cache(maxsize=1024)
def center_data(E: Extension) -> CenterData:
    """Z = Z(H) as its own group, its embeddings into H and E, and the action of G on it."""
    Z, into_sub = center(E.sub).as_group()
    into_total = compose(into_sub, E.incl)
    pos = {e: z for z, e in enumerate(into_total.map)}
    T = E.total
    rows = tuple(
        tuple(pos[T.conj(E.set_section[g], into_total.map[z])] for z in Z.elements())
        for g in E.quot.elements()
    )
    return CenterData(Z, into_sub, into_total, Action(E.quot, Z, rows))
