import itertools

import pytest

from app.core.catalog import cyclic, dihedral, identify, klein, quaternion, symmetric
from app.core.cocycles import semidirect_extension
from app.core.extensions import ext_isomorphism, find_section, make_extension, relabel
from app.core.factor_systems import schreier_enumerate
from app.core.groups import Action, GroupHom, direct_product
from app.core.outer import identifications, make_witness, outer_witnesses, same_outer_action
from app.core.torsor import (
    act,
    act_compatibility_check,
    build_class_set,
    center_action,
    diff,
    find_class,
    induced_action_on_center,
    verify_simply_transitive,
    verify_simply_transitive_async,
    zgroup_classes,
)
from app.errors import ActionMismatch, SignatureMismatch


def z4_extension():
    C2, C4 = cyclic(2), cyclic(4)
    return make_extension(C2, C4, C2, GroupHom(C2, C4, (0, 2)), GroupHom(C4, C2, (0, 1, 0, 1)))


def v4_extension():
    C2 = cyclic(2)
    dp = direct_product(C2, C2)
    return make_extension(C2, dp.group, C2, dp.injections[1], dp.projections[0])


def s3_extension():
    return semidirect_extension(Action(cyclic(2), cyclic(3), ((0, 1, 2), (0, 2, 1))))


def test_center_action_of_s3_is_inversion():
    assert center_action(s3_extension()).table == ((0, 1, 2), (0, 2, 1))
    assert induced_action_on_center(s3_extension()).is_injective


def test_zgroup_classes_start_with_split_class():
    classes = zgroup_classes(z4_extension())
    assert len(classes) == 2
    assert find_section(classes[0]) is not None
    assert find_section(classes[1]) is None


def test_split_class_acts_trivially():
    E = z4_extension()
    split = zgroup_classes(E)[0]
    assert ext_isomorphism(act(E, split), E) is not None


def test_act_on_abelian_kernel_is_baer_sum():
    E = z4_extension()
    assert ext_isomorphism(act(E, E), v4_extension()) is not None
    assert ext_isomorphism(act(v4_extension(), E), E) is not None


def test_diff_of_extension_with_itself_is_split():
    E = z4_extension()
    w = same_outer_action(E, E)
    assert find_section(diff(E, E, w)) is not None


def test_diff_recovers_connecting_class():
    E1, E2 = z4_extension(), v4_extension()
    X = diff(E1, E2, same_outer_action(E1, E2))
    assert ext_isomorphism(X, z4_extension()) is not None
    assert ext_isomorphism(act(E1, X), E2) is not None


def test_dihedral_and_quaternion_differ_by_one_class():
    exts = schreier_enumerate(klein(), cyclic(2))
    d4 = next(E for E in exts if identify(E.total) == "D4")
    q8 = next(E for E in exts if identify(E.total) == "Q8")
    X = diff(d4, q8, same_outer_action(d4, q8))
    assert ext_isomorphism(act(d4, X), q8) is not None


def test_act_checks_coefficients():
    with pytest.raises(SignatureMismatch):
        act(z4_extension(), s3_extension())
    trivial = semidirect_extension(Action.trivial(cyclic(2), cyclic(3)))
    with pytest.raises(ActionMismatch):
        act(s3_extension(), trivial)


def test_diff_rejects_incompatible_identification():
    E1 = s3_extension()
    E2 = semidirect_extension(Action.trivial(cyclic(2), cyclic(3)))
    w = make_witness(E1, E2, identifications(E1, E2)[0])
    with pytest.raises(ActionMismatch):
        diff(E1, E2, w)


def test_action_is_compatible_with_baer_sum():
    E = z4_extension()
    Z = zgroup_classes(E)
    for Z1 in Z:
        for Z2 in Z:
            assert act_compatibility_check(E, Z1, Z2)


def test_build_class_set_deduplicates():
    exts = schreier_enumerate(cyclic(2), cyclic(2))
    S = build_class_set(exts[0], exts + exts)
    assert len(S.members) == 2
    assert S.witness_counts == [1, 1]
    assert find_class(S.members, exts[1]) == 1


def test_simply_transitive_for_c2_by_c2():
    exts = schreier_enumerate(cyclic(2), cyclic(2))
    report = verify_simply_transitive(build_class_set(exts[0], exts))
    assert report.members == 2
    assert report.zgroup_order == 2
    assert report.free and report.transitive and report.well_defined
    assert report.action_table == [[0, 1], [1, 0]]
    assert report.counterexample is None


def test_simply_transitive_for_v4_by_c2():
    exts = schreier_enumerate(klein(), cyclic(2))
    report = verify_simply_transitive(build_class_set(exts[0], exts))
    assert report.members == 8
    assert report.zgroup_order == 8
    assert report.round_trips_checked == 8 * 16


def test_nonabelian_kernel_with_trivial_center():
    exts = schreier_enumerate(cyclic(2), symmetric(3))
    report = verify_simply_transitive(build_class_set(exts[0], exts))
    assert report.members == 1
    assert report.zgroup_order == 1


@pytest.mark.asyncio
async def test_async_verification_matches_sync():
    exts = schreier_enumerate(cyclic(2), cyclic(4))
    S = build_class_set(exts[0], exts)
    report = await verify_simply_transitive_async(S)
    assert report == verify_simply_transitive(S)


def reversed_copy(E):
    n = E.total.order
    return relabel(E, [n - 1 - x for x in range(n)])[0]


def test_act_is_well_defined_in_both_arguments():
    exts = schreier_enumerate(klein(), cyclic(2))
    for E in exts[:3]:
        for Zp in zgroup_classes(E):
            expected = act(E, Zp)
            assert ext_isomorphism(act(reversed_copy(E), Zp), expected) is not None
            assert ext_isomorphism(act(E, reversed_copy(Zp)), expected) is not None


@pytest.mark.parametrize("H", [dihedral(4), quaternion()])
def test_diff_over_every_identification_of_nonabelian_kernel(H):
    """Aut(E/Z) is nontrivial here, yet exactly one identification transports the actions."""
    exts = schreier_enumerate(cyclic(2), H)
    S = build_class_set(exts[0], exts)
    report = verify_simply_transitive(S)
    n = len(S.members)
    assert report.witnesses_checked == n * n
    for E1, E2 in itertools.product(S.members, repeat=2):
        assert len(identifications(E1, E2)) > 1
        [w] = outer_witnesses(E1, E2)
        assert ext_isomorphism(act(E1, diff(E1, E2, w)), E2) is not None
