"""
Extension, cocycle and report documents on disk (JSON via pydantic).

Groups are written as catalog names when the name round-trips to the same
table, and as full Cayley tables otherwise.
"""
import os
from typing import Union

import aiofiles
from pydantic import BaseModel

from app.core.catalog import group_from_name
from app.core.cocycles import TwoCocycle
from app.core.extensions import Extension
from app.core.factor_systems import FactorSystem
from app.core.groups import Action, FiniteGroup, GroupHom, make_group
from app.errors import ExtensionCalculusError, MalformedTable
from app.schemas import (
    ExtensionDocument,
    FactorSystemDocument,
    GroupDocument,
    GroupRef,
    TwoCocycleDocument,
)


def group_to_ref(G: FiniteGroup) -> GroupRef:
    if G.name:
        try:
            if group_from_name(G.name) == G:
                return G.name
        except ExtensionCalculusError:
            pass
    return GroupDocument(name=G.name or None, order=G.order, cayley=[list(r) for r in G.cayley])


def group_from_ref(ref: GroupRef) -> FiniteGroup:
    if isinstance(ref, str):
        return group_from_name(ref)
    return make_group(ref.cayley, ref.name or "")


def extension_to_document(E: Extension) -> ExtensionDocument:
    return ExtensionDocument(
        sub=group_to_ref(E.sub),
        total=group_to_ref(E.total),
        quot=group_to_ref(E.quot),
        incl=list(E.incl.map),
        proj=list(E.proj.map),
    )


def extension_from_document(doc: ExtensionDocument) -> Extension:
    H, T, G = group_from_ref(doc.sub), group_from_ref(doc.total), group_from_ref(doc.quot)
    return Extension(H, T, G, GroupHom(H, T, tuple(doc.incl)), GroupHom(T, G, tuple(doc.proj)))


def cocycle_to_document(f: TwoCocycle) -> TwoCocycleDocument:
    return TwoCocycleDocument(
        group=group_to_ref(f.group),
        coeff=group_to_ref(f.coeff),
        action=[list(r) for r in f.action.table],
        table=[list(r) for r in f.table],
    )


def cocycle_from_document(doc: TwoCocycleDocument) -> TwoCocycle:
    G, A = group_from_ref(doc.group), group_from_ref(doc.coeff)
    action = Action(G, A, tuple(tuple(r) for r in doc.action))
    return TwoCocycle(action, tuple(tuple(r) for r in doc.table))


def factor_system_to_document(fs: FactorSystem) -> FactorSystemDocument:
    return FactorSystemDocument(
        group=group_to_ref(fs.group),
        kernel=group_to_ref(fs.kernel),
        lift=[list(m) for m in fs.lift],
        twist=[list(r) for r in fs.twist],
    )


def factor_system_from_document(doc: FactorSystemDocument) -> FactorSystem:
    return FactorSystem(
        group_from_ref(doc.group),
        group_from_ref(doc.kernel),
        tuple(tuple(m) for m in doc.lift),
        tuple(tuple(r) for r in doc.twist),
    )


async def read_extension(path: str) -> Extension:
    async with aiofiles.open(path, "r", encoding="utf-8") as f:
        try:
            raw = await f.read()
        except UnicodeDecodeError as exc:
            raise MalformedTable(f"{path} is not UTF-8 text: {exc}") from exc
    try:
        doc = ExtensionDocument.model_validate_json(raw)
    except ValueError as exc:
        raise MalformedTable(f"{path} is not an extension document: {exc}") from exc
    return extension_from_document(doc)


async def write_document(path: str, doc: Union[BaseModel, Extension]) -> None:
    if isinstance(doc, Extension):
        doc = extension_to_document(doc)
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    async with aiofiles.open(path, "w") as f:
        await f.write(doc.model_dump_json(indent=2) + "\n")
