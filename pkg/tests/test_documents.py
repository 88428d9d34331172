import json

import pytest
from pydantic import ValidationError

from app.core.catalog import cyclic
from app.core.cocycles import cocycle_from_extension
from app.core.documents import (
    cocycle_from_document,
    cocycle_to_document,
    extension_from_document,
    extension_to_document,
    factor_system_from_document,
    factor_system_to_document,
    group_from_ref,
    group_to_ref,
    read_extension,
    write_document,
)
from app.core.extensions import ext_isomorphism, make_extension
from app.core.factor_systems import factor_systems
from app.core.groups import GroupHom, make_group
from app.errors import MalformedTable
from app.schemas import GroupDocument


def z4_extension():
    C2, C4 = cyclic(2), cyclic(4)
    return make_extension(C2, C4, C2, GroupHom(C2, C4, (0, 2)), GroupHom(C4, C2, (0, 1, 0, 1)))


def test_catalog_groups_are_written_by_name():
    assert group_to_ref(cyclic(4)) == "C4"


def test_unnamed_groups_are_written_as_tables():
    G = make_group(cyclic(3).cayley)
    ref = group_to_ref(G)
    assert isinstance(ref, GroupDocument)
    assert ref.order == 3
    assert group_from_ref(ref) == G


def test_extension_document_preserves_maps():
    E = z4_extension()
    doc = extension_to_document(E)
    assert doc.incl == [0, 2]
    assert ext_isomorphism(extension_from_document(doc), E) is not None


def test_cocycle_document():
    f = cocycle_from_extension(z4_extension())
    assert cocycle_from_document(cocycle_to_document(f)) == f


def test_factor_system_document():
    fs = next(factor_systems(cyclic(2), cyclic(3)))
    assert factor_system_from_document(factor_system_to_document(fs)).twist == fs.twist


@pytest.mark.asyncio
async def test_write_and_read_extension(tmp_path):
    """Documents land in nested folders and read back as the same extension."""
    path = str(tmp_path / "out" / "z4.json")
    await write_document(path, z4_extension())
    E = await read_extension(path)
    assert E.total.order == 4
    assert ext_isomorphism(E, z4_extension()) is not None


@pytest.mark.asyncio
async def test_read_malformed_document(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"sub": "C2"}')
    with pytest.raises(MalformedTable):
        await read_extension(str(path))


def test_group_document_order_must_match_table():
    GroupDocument(order=2, cayley=[[0, 1], [1, 0]])
    with pytest.raises(ValidationError):
        GroupDocument(order=3, cayley=[[0, 1], [1, 0]])
    with pytest.raises(ValidationError):
        GroupDocument(cayley=[[0]])


@pytest.mark.asyncio
async def test_read_document_with_wrong_order(tmp_path):
    doc = extension_to_document(z4_extension())
    data = doc.model_dump()
    data["total"] = {"order": 5, "cayley": [list(r) for r in cyclic(4).cayley]}
    path = tmp_path / "wrong_order.json"
    path.write_text(json.dumps(data))
    with pytest.raises(MalformedTable):
        await read_extension(str(path))


@pytest.mark.asyncio
async def test_read_undecodable_document(tmp_path):
    path = tmp_path / "binary.json"
    path.write_bytes(b"\xff\xfe\x00{")
    with pytest.raises(MalformedTable):
        await read_extension(str(path))
