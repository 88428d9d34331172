from unittest.mock import patch

import pytest

from app.core.catalog import cyclic
from app.core.classify import classify, extension_label, group_label, outer_partition
from app.core.cocycles import cohomology_representatives
from app.core.factor_systems import schreier_enumerate
from app.errors import BoundExceeded, ViolationFound


@pytest.mark.asyncio
async def test_classify_c2_by_c2():
    report = await classify("C2", "C2")
    assert report.pair == ("C2", "C2")
    assert report.extension_count == 2
    assert len(report.outer_classes) == 1
    oc = report.outer_classes[0]
    assert oc.members == ["E0 [V4]", "E1 [C4]"]
    assert oc.zgroup_order == 2
    assert oc.torsor_verified
    assert oc.split_members == ["E0 [V4]"]
    assert oc.delta_image == oc.split_members
    assert report.timing is None


@pytest.mark.asyncio
async def test_classify_c2_by_c3_has_two_outer_classes():
    report = await classify("C2", "C3")
    assert report.extension_count == 2
    assert [len(oc.members) for oc in report.outer_classes] == [1, 1]
    assert all(oc.torsor_verified for oc in report.outer_classes)


@pytest.mark.asyncio
async def test_classify_nonabelian_kernel():
    report = await classify("C2", "S3")
    assert report.extension_count == 1
    assert report.outer_classes[0].zgroup_order == 1


@pytest.mark.asyncio
async def test_classify_central_extensions_of_v4():
    report = await classify("V4", "C2")
    assert report.extension_count == 8
    assert len(report.outer_classes) == 1
    assert report.outer_classes[0].zgroup_order == 8
    assert len(report.outer_classes[0].split_members) == 1


@pytest.mark.asyncio
async def test_classify_reports_timing_on_request():
    report = await classify("C2", "C2", timing=True)
    assert set(report.timing) == {"enumerate", "partition", "verify"}


@pytest.mark.asyncio
async def test_classify_timing_from_settings():
    with patch("app.core.classify.settings") as mock_settings:
        mock_settings.default_bound = 32
        mock_settings.report_timing = True
        report = await classify("C2", "C2")
    assert report.timing is not None


@pytest.mark.asyncio
async def test_smaller_bound_gives_same_classification():
    small = await classify("C2", "C2", 8)
    large = await classify("C2", "C2", 32)
    assert small.outer_classes == large.outer_classes
    with pytest.raises(BoundExceeded):
        await classify("C4", "C4", 8)


def test_outer_partition_splits_by_action():
    exts = schreier_enumerate(cyclic(2), cyclic(4))
    parts = outer_partition(exts)
    assert len(parts) == 2
    assert sorted(len(p) for p in parts) == [2, 2]


def test_labels():
    E = schreier_enumerate(cyclic(2), cyclic(2))[1]
    assert extension_label(1, E) == "E1 [C4]"
    assert group_label(cyclic(3)) == "C3"


@pytest.mark.asyncio
async def test_classify_catches_a_short_zgroup():
    """With Ext(G, Z, E) cut to one class, the eight enumerated members cannot form a torsor."""
    with patch("app.core.torsor.cohomology_representatives", side_effect=lambda a: cohomology_representatives(a)[:1]):
        with pytest.raises(ViolationFound) as exc:
            await classify("V4", "C2")
    assert exc.value.report.members == 8
    assert exc.value.report.zgroup_order == 1
