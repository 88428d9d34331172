import itertools

from app.core.catalog import cyclic, dihedral, quaternion
from app.core.cocycles import semidirect_extension
from app.core.extensions import make_extension
from app.core.factor_systems import schreier_enumerate
from app.core.groups import (
    Action,
    GroupHom,
    direct_product,
    find_isomorphism,
    identity_hom,
    out_group,
    trivial_hom,
)
from app.core.outer import (
    classical_kappa,
    delta_normality_test,
    identifications,
    kappa_maps,
    make_witness,
    outer_witnesses,
    quotient_action,
    quotient_by_center,
    same_outer_action,
)


def s3_extension():
    return semidirect_extension(Action(cyclic(2), cyclic(3), ((0, 1, 2), (0, 2, 1))))


def c6_extension():
    return semidirect_extension(Action.trivial(cyclic(2), cyclic(3)))


def z4_extension():
    C2, C4 = cyclic(2), cyclic(4)
    return make_extension(C2, C4, C2, GroupHom(C2, C4, (0, 2)), GroupHom(C4, C2, (0, 1, 0, 1)))


def v4_extension():
    C2 = cyclic(2)
    dp = direct_product(C2, C2)
    return make_extension(C2, dp.group, C2, dp.injections[1], dp.projections[0])


def test_quotient_by_center_of_abelian_kernel():
    E0 = quotient_by_center(z4_extension())
    assert E0.sub.order == 1
    assert E0.total.order == 2


def test_quotient_by_center_of_q8():
    Q8, C1 = quaternion(), cyclic(1)
    E = make_extension(Q8, Q8, C1, identity_hom(Q8), trivial_hom(Q8, C1))
    E0 = quotient_by_center(E)
    assert E0.sub.order == 4
    assert find_isomorphism(E0.total, direct_product(cyclic(2), cyclic(2)).group) is not None


def test_quotient_action_on_kernel():
    a = quotient_action(s3_extension())
    assert a.acting.order == 2
    assert a.table[1] == (0, 2, 1)


def test_same_outer_action_for_central_extensions():
    w = same_outer_action(z4_extension(), v4_extension())
    assert w is not None
    assert w.action_check


def test_inversion_and_trivial_action_differ():
    E1, E2 = s3_extension(), c6_extension()
    assert same_outer_action(E1, E2) is None
    isos = identifications(E1, E2)
    assert len(isos) == 1
    assert not make_witness(E1, E2, isos[0]).action_check
    assert outer_witnesses(E1, E2) == []


def test_diagonal_normality_agrees_with_action_check():
    E1, E2 = s3_extension(), c6_extension()
    bad = make_witness(E1, E2, identifications(E1, E2)[0])
    assert not delta_normality_test(E1, E2, bad)
    good = same_outer_action(E1, E1)
    assert delta_normality_test(E1, E1, good)


def test_diagonal_normality_over_all_identifications():
    exts = schreier_enumerate(cyclic(2), cyclic(4))
    for E1, E2 in itertools.product(exts, repeat=2):
        for iso in identifications(E1, E2):
            w = make_witness(E1, E2, iso)
            assert delta_normality_test(E1, E2, w) == w.action_check


def test_classical_kappa():
    kappa = classical_kappa(s3_extension())
    assert kappa.codomain == out_group(cyclic(3)).group
    assert kappa.codomain.order == 2
    assert kappa.map[1] != kappa.codomain.identity
    assert all(x == kappa.codomain.identity for x in classical_kappa(c6_extension()).map)


def test_kappa_agrees_with_relative_definition():
    exts = schreier_enumerate(cyclic(2), cyclic(4))
    for E1, E2 in itertools.product(exts, repeat=2):
        assert (same_outer_action(E1, E2) is not None) == (kappa_maps(E1) == kappa_maps(E2))


def test_classical_kappa_lands_in_out_of_q8():
    Q8 = quaternion()
    Out = out_group(Q8).group
    assert Out.order == 6
    assert not Out.is_abelian
    for E in schreier_enumerate(cyclic(2), Q8):
        kappa = classical_kappa(E)
        assert kappa.codomain == Out


def test_classical_kappa_agrees_with_canonical_representatives():
    exts = schreier_enumerate(cyclic(2), dihedral(4))
    for E1, E2 in itertools.product(exts, repeat=2):
        assert (classical_kappa(E1).map == classical_kappa(E2).map) == (kappa_maps(E1) == kappa_maps(E2))


def test_same_outer_action_is_symmetric_and_transitive():
    """Inverses and composites of witnesses are witnesses again."""
    for H in (cyclic(4), dihedral(4)):
        exts = schreier_enumerate(cyclic(2), H)
        for E1, E2 in itertools.product(exts, repeat=2):
            w = same_outer_action(E1, E2)
            if w is None:
                continue
            assert make_witness(E2, E1, w.e0_iso.inverse()).action_check
            for E3 in exts:
                w23 = same_outer_action(E2, E3)
                if w23 is not None:
                    assert make_witness(E1, E3, w.e0_iso.compose(w23.e0_iso)).action_check
