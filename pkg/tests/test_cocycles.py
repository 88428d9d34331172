import itertools
from unittest.mock import patch

import pytest

from app.core.catalog import cyclic, group_from_name, klein, symmetric
from app.core.cocycles import (
    TwoCocycle,
    aut_extension,
    aut_extension_correspondence,
    baer_diff,
    baer_inverse,
    baer_sum,
    coboundary,
    cocycle_from_extension,
    cohomologous,
    cohomology_representatives,
    crossed_morphism_group,
    extension_from_cocycle,
    h1_coc,
    semidirect_extension,
    tree_normalized_cocycles,
    two_cocycles,
    z1_cocycles,
)
from app.core.extensions import ext_isomorphism, find_section, induced_action, make_extension
from app.core.factor_systems import schreier_enumerate
from app.core.groups import Action, GroupHom, direct_product, find_isomorphism, homomorphisms
from app.errors import ActionMismatch, BoundExceeded, MalformedTable, NotAbelian


def inversion_on_c3():
    return Action(cyclic(2), cyclic(3), ((0, 1, 2), (0, 2, 1)))


def z4_extension():
    C2, C4 = cyclic(2), cyclic(4)
    return make_extension(C2, C4, C2, GroupHom(C2, C4, (0, 2)), GroupHom(C4, C2, (0, 1, 0, 1)))


def v4_extension():
    C2 = cyclic(2)
    dp = direct_product(C2, C2)
    return make_extension(C2, dp.group, C2, dp.injections[1], dp.projections[0])


def test_crossed_morphisms_of_trivial_group():
    assert len(z1_cocycles(Action.trivial(cyclic(1), cyclic(2)))) == 1


def test_crossed_morphisms_counts():
    assert len(z1_cocycles(Action.trivial(cyclic(2), cyclic(2)))) == 2
    cms = z1_cocycles(inversion_on_c3())
    assert len(cms) == 3
    assert cms[0].is_trivial


def test_crossed_morphism_group_is_cyclic_for_inversion():
    Z1, cms = crossed_morphism_group(inversion_on_c3())
    assert Z1.order == 3
    assert Z1.is_abelian
    assert [c.map for c in cms] == sorted(c.map for c in cms)


def test_crossed_morphism_group_needs_abelian_coefficients():
    with pytest.raises(NotAbelian):
        crossed_morphism_group(Action.trivial(cyclic(2), symmetric(3)))


def test_h1_with_trivial_action_is_conjugacy_of_homs():
    """Homs C2 -> S3 up to conjugation: the trivial one and the transpositions."""
    classes = h1_coc(Action.trivial(cyclic(2), symmetric(3)))
    assert len(classes.cocycles) == 4
    assert len(classes) == 2
    assert classes.classes[classes.distinguished] == (0,)


def test_h1_of_inversion_on_c3_is_trivial():
    classes = h1_coc(inversion_on_c3())
    assert len(classes) == 1
    assert classes.class_of((0, 1)) == classes.distinguished


def test_aut_extension_counts():
    assert len(aut_extension(z4_extension())) == 2
    assert len(aut_extension(semidirect_extension(inversion_on_c3()))) == 3
    assert len(aut_extension(v4_extension())) == 2


def test_aut_extension_matches_crossed_morphisms():
    pairs = aut_extension_correspondence(z4_extension())
    assert len(pairs) == 2
    phi, f = pairs[0]
    assert phi.is_trivial
    assert f.map.map == (0, 1, 2, 3)


def test_two_cocycles_h2_orders():
    assert two_cocycles(Action.trivial(cyclic(2), cyclic(2))).h2_order == 2
    assert two_cocycles(Action.trivial(klein(), cyclic(2))).h2_order == 8
    assert two_cocycles(Action.trivial(cyclic(1), cyclic(3))).h2_order == 1
    assert two_cocycles(inversion_on_c3()).h2_order == 1


def test_two_cocycles_are_classes_times_coboundaries():
    data = two_cocycles(Action.trivial(cyclic(2), cyclic(2)))
    assert len(data.cocycles) == data.h2_order * len(data.coboundaries)
    assert data.representatives[0].is_zero


def test_two_cocycles_reject_nonabelian_coefficients():
    with pytest.raises(NotAbelian):
        two_cocycles(Action.trivial(cyclic(2), symmetric(3)))


def test_cocycle_search_respects_limit():
    """The meet-in-the-middle search refuses halves above search_limit."""
    with patch("app.core.cocycles.settings") as mock_settings:
        mock_settings.search_limit = 1
        with pytest.raises(BoundExceeded):
            tree_normalized_cocycles(Action.trivial(klein(), cyclic(2)))


def test_two_cocycle_validation():
    action = Action.trivial(cyclic(2), cyclic(2))
    with pytest.raises(MalformedTable):
        TwoCocycle(action, ((0, 1), (1, 0)))


def test_extension_from_cocycle():
    reps = cohomology_representatives(Action.trivial(cyclic(2), cyclic(2)))
    assert len(reps) == 2
    action = Action.trivial(cyclic(2), cyclic(2))
    split = extension_from_cocycle(TwoCocycle(action, reps[0]))
    twisted = extension_from_cocycle(TwoCocycle(action, reps[1]))
    assert find_section(split) is not None
    assert find_section(twisted) is None
    assert find_isomorphism(twisted.total, cyclic(4)) is not None


def test_cocycle_from_extension_round_trip():
    E = z4_extension()
    f = cocycle_from_extension(E)
    assert not f.is_zero
    assert ext_isomorphism(E, extension_from_cocycle(f)) is not None


def test_cohomologous_cocycles():
    action = Action.trivial(cyclic(2), cyclic(2))
    f = cocycle_from_extension(z4_extension())
    shifted = f + TwoCocycle(action, coboundary(action, (0, 1)))
    assert cohomologous(f, shifted)
    assert not cohomologous(f, f + f)


def test_baer_sum_of_z4_with_itself_splits():
    E = z4_extension()
    assert ext_isomorphism(baer_sum(E, E), v4_extension()) is not None
    assert ext_isomorphism(baer_sum(E, v4_extension()), E) is not None


def test_baer_diff_of_extension_with_itself_splits():
    E = z4_extension()
    assert find_section(baer_diff(E, E)) is not None
    assert ext_isomorphism(baer_inverse(E), E) is not None


def test_baer_sum_needs_matching_actions():
    twisted = semidirect_extension(inversion_on_c3())
    straight = semidirect_extension(Action.trivial(cyclic(2), cyclic(3)))
    with pytest.raises(ActionMismatch):
        baer_sum(twisted, straight)


def test_baer_sum_needs_abelian_kernel():
    E = semidirect_extension(Action.trivial(cyclic(2), symmetric(3)))
    with pytest.raises(NotAbelian):
        baer_sum(E, E)


BAER_PAIRS = [("V4", "C2"), ("C2", "C4"), ("C4", "C2"), ("C3", "C3")]


def coefficient_actions(g, a):
    """The actions of G on A induced by some extension, in enumeration order."""
    actions = {}
    for E in schreier_enumerate(group_from_name(g), group_from_name(a)):
        action = induced_action(E)
        actions.setdefault(action.table, action)
    return list(actions.values())


def class_extensions(action):
    reps = [TwoCocycle(action, t) for t in cohomology_representatives(action)]
    return reps, [extension_from_cocycle(f) for f in reps]


def isomorphic(E1, E2):
    return ext_isomorphism(E1, E2) is not None


@pytest.mark.parametrize("g, a", BAER_PAIRS)
def test_baer_sum_is_cocycle_addition(g, a):
    """The categorical sum and difference agree with cocycle arithmetic on every pair of classes."""
    for action in coefficient_actions(g, a):
        reps, exts = class_extensions(action)
        for (f1, E1), (f2, E2) in itertools.product(zip(reps, exts), repeat=2):
            assert isomorphic(baer_sum(E1, E2), extension_from_cocycle(f1 + f2))
            assert isomorphic(baer_diff(E1, E2), extension_from_cocycle(f1 + -f2))


@pytest.mark.parametrize("g, a", BAER_PAIRS)
def test_baer_group_axioms(g, a):
    for action in coefficient_actions(g, a):
        _, exts = class_extensions(action)
        split = semidirect_extension(action)
        for E in exts:
            assert isomorphic(baer_sum(E, split), E)
            assert isomorphic(baer_sum(E, baer_diff(split, E)), split)
            assert isomorphic(baer_diff(E, E), split)
        for E1, E2 in itertools.product(exts, repeat=2):
            assert isomorphic(baer_sum(E1, E2), baer_sum(E2, E1))
        for E1, E2, E3 in itertools.product(exts, repeat=3):
            assert isomorphic(baer_sum(baer_sum(E1, E2), E3), baer_sum(E1, baer_sum(E2, E3)))


@pytest.mark.parametrize("g, a", [("V4", "C2"), ("C2", "C4"), ("C4", "C2")])
def test_automorphisms_of_central_extensions_are_homs(g, a):
    """For central E, f -> (g -> f(s(g)) s(g)^-1) is an isomorphism Aut(E) -> Hom(G, H)."""
    G, H = group_from_name(g), group_from_name(a)
    homs = {h.map for h in homomorphisms(G, H)}
    for E in schreier_enumerate(G, H):
        if not induced_action(E).is_trivial:
            continue
        T, s, r = E.total, E.set_section, E.restrict
        auts = aut_extension(E)

        def as_hom(f):
            return tuple(r[T.cayley[f.map.map[s[x]]][T.inverse[s[x]]]] for x in G.elements())

        images = {f.map.map: as_hom(f) for f in auts}
        assert set(images.values()) == homs
        assert len(auts) == len(homs)
        for f1, f2 in itertools.product(auts, repeat=2):
            pointwise = tuple(H.cayley[x][y] for x, y in zip(images[f1.map.map], images[f2.map.map]))
            assert images[f1.compose(f2).map.map] == pointwise
