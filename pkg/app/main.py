"""
Command-line front end.

    python -m app.main classify C2 C2 --format json
    python -m app.main aut extension.json

Exit codes: 0 success, 1 usage, 2 failed precondition, 3 a verified statement failed.
"""
import argparse
import asyncio
import json
import logging
import sys
from typing import Any, List, Optional, Sequence

from pydantic import BaseModel

from app.config import settings
from app.core.classify import classify, extension_label, group_label, outer_partition, resolve_group
from app.core.cocycles import aut_extension, z1_cocycles
from app.core.documents import extension_to_document, read_extension
from app.core.extensions import center_data, find_section, is_split
from app.core.factor_systems import schreier_enumerate_async
from app.core.outer import kappa_maps, same_outer_action
from app.core.torsor import act, build_class_set, diff, verify_simply_transitive_async
from app.errors import ActionMismatch, ExtensionCalculusError, ViolationFound
from app.schemas import (
    AutomorphismReport,
    EnumeratedExtension,
    EnumerationReport,
    SplitReport,
    TorsorCheckReport,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_VIOLATION = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=settings.default_bound, help="cap on |G|*|H|")
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--seedless", action="store_true", help="accepted for compatibility; output is always deterministic")
    common.add_argument("--timing", action="store_true", help="include per-phase durations in reports")

    parser = argparse.ArgumentParser(prog="extcalc", description="Extensions of finite groups and their outer classes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("classify", "enumerate", "torsor-check"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("G")
        p.add_argument("H")
    for name in ("aut", "split"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("extension")
    p = sub.add_parser("diff", parents=[common])
    p.add_argument("e1")
    p.add_argument("e2")
    p = sub.add_parser("act", parents=[common])
    p.add_argument("e")
    p.add_argument("eprime")
    return parser


async def _enumerate(args: argparse.Namespace) -> EnumerationReport:
    G, H = resolve_group(args.G), resolve_group(args.H)
    exts = await schreier_enumerate_async(G, H, args.bound)
    rows = [
        EnumeratedExtension(label=extension_label(i, E), split=is_split(E), kappa=[list(m) for m in kappa_maps(E)])
        for i, E in enumerate(exts)
    ]
    return EnumerationReport(pair=(group_label(G), group_label(H)), bound=args.bound, extensions=rows)


async def _torsor_check(args: argparse.Namespace) -> TorsorCheckReport:
    G, H = resolve_group(args.G), resolve_group(args.H)
    exts = await schreier_enumerate_async(G, H, args.bound)
    reports = []
    for part in await asyncio.to_thread(outer_partition, exts):
        S = await asyncio.to_thread(build_class_set, exts[part[0]], [exts[i] for i in part])
        reports.append(await verify_simply_transitive_async(S))
    return TorsorCheckReport(pair=(group_label(G), group_label(H)), classes=reports)


async def _aut(args: argparse.Namespace) -> AutomorphismReport:
    E = await read_extension(args.extension)
    auts = await asyncio.to_thread(aut_extension, E)
    crossed = z1_cocycles(center_data(E).action)
    return AutomorphismReport(count=len(auts), crossed_count=len(crossed), maps=[list(f.map.map) for f in auts])


async def _split(args: argparse.Namespace) -> SplitReport:
    E = await read_extension(args.extension)
    s = await asyncio.to_thread(find_section, E)
    return SplitReport(split=s is not None, section=list(s.map) if s is not None else None)


async def _diff(args: argparse.Namespace) -> BaseModel:
    E1, E2 = await read_extension(args.e1), await read_extension(args.e2)
    w = await asyncio.to_thread(same_outer_action, E1, E2)
    if w is None:
        raise ActionMismatch("the extensions do not induce the same outer action")
    return extension_to_document(await asyncio.to_thread(diff, E1, E2, w))


async def _act(args: argparse.Namespace) -> BaseModel:
    E, Ep = await read_extension(args.e), await read_extension(args.eprime)
    return extension_to_document(await asyncio.to_thread(act, E, Ep))


async def dispatch(args: argparse.Namespace) -> BaseModel:
    if args.command == "classify":
        return await classify(args.G, args.H, args.bound, timing=args.timing or None)
    handlers = {
        "enumerate": _enumerate,
        "torsor-check": _torsor_check,
        "aut": _aut,
        "split": _split,
        "diff": _diff,
        "act": _act,
    }
    return await handlers[args.command](args)


def render_text(value: Any, indent: int = 0) -> List[str]:
    """Indented key/value lines mirroring the JSON document."""
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            lines.append(f"{pad}-")
            lines.extend(render_text(item, indent + 1))
        return lines
    return [f"{pad}{json.dumps(value)}"]


def _is_flat(v: Any) -> bool:
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and all(isinstance(y, int) for y in x)) for x in items)


def render(report: BaseModel, fmt: str) -> str:
    data = report.model_dump(mode="json")
    if fmt == "json":
        return json.dumps(data, indent=2)
    return "\n".join(render_text(data))


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    logging.basicConfig(level=settings.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        report = asyncio.run(dispatch(args))
    except ViolationFound as exc:
        print(f"violation: {exc}", file=sys.stderr)
        print(json.dumps(exc.counterexample, indent=2, default=str), file=sys.stderr)
        return EXIT_VIOLATION
    except ExtensionCalculusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    print(render(report, args.format))
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
