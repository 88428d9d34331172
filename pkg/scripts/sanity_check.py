#!/usr/bin/env python3
"""
End-to-end sweep over small catalog pairs.
Produces: <ARTIFACTS_DIR>/sweep_output.json (artifacts/ by default)
Usage:
  python scripts/sanity_check.py              # pairs with |G|*|H| <= 24
  SWEEP_BOUND=12 python scripts/sanity_check.py
Exit: 0 = pass, 1 = fail
"""
import asyncio
import itertools
import json
import os
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from app.config import settings  # noqa: E402
from app.core.catalog import group_from_name, order_of  # noqa: E402
from app.core.classify import classify  # noqa: E402
from app.core.cocycles import aut_extension, cohomology_representatives, z1_cocycles  # noqa: E402
from app.core.extensions import center_data, induced_action  # noqa: E402
from app.core.factor_systems import cross_check_enumeration  # noqa: E402
from app.core.outer import delta_normality_test, identifications, make_witness  # noqa: E402
from app.errors import ViolationFound  # noqa: E402

SWEEP_BOUND = int(os.environ.get("SWEEP_BOUND", "24"))
NAMES = ["C2", "C3", "C4", "V4", "S3", "Q8", "D4"]
OUTPUT_PATH = settings.artifact_path("sweep_output.json")


def fail(reason: str):
    print(f"\n[FAIL] {reason}", file=sys.stderr)
    Path(OUTPUT_PATH).parent.mkdir(parents=True, exist_ok=True)
    Path(OUTPUT_PATH).write_text(json.dumps({"status": "error", "reason": reason}, indent=2))
    sys.exit(1)


def check(condition: bool, label: str):
    if not condition:
        fail(label)
    print(f"  [PASS] {label}")


def oracle_checks(g: str, h: str) -> dict:
    G, H = group_from_name(g), group_from_name(h)
    try:
        exts = cross_check_enumeration(G, H, SWEEP_BOUND)
    except ViolationFound as exc:
        fail(f"{g} by {h}: {exc} {exc.counterexample}")
    print(f"  [PASS] {g} by {h}: exhaustive and H2-indexed enumerations agree on {len(exts)} classes")
    for E in exts:
        auts = aut_extension(E)
        crossed = z1_cocycles(center_data(E).action)
        check(len(auts) == len(crossed), f"{g} by {h}: |Aut(E)| = |Z1(G, Z)| = {len(auts)}")

    h2 = None
    if H.is_abelian:
        by_action: dict = {}
        for E in exts:
            a = induced_action(E)
            by_action.setdefault(a.table, [a, 0])[1] += 1
        h2 = {}
        for table, (a, count) in by_action.items():
            expected = len(cohomology_representatives(a))
            check(count == expected, f"{g} by {h}: {count} extensions = |H2| = {expected} for one action")
            h2[str(len(h2))] = expected

    lemma_pairs = 0
    for E1, E2 in itertools.product(exts, repeat=2):
        for iso in identifications(E1, E2):
            w = make_witness(E1, E2, iso)
            if delta_normality_test(E1, E2, w) != w.action_check:
                fail(f"{g} by {h}: diagonal normality disagrees with action compatibility")
            lemma_pairs += 1
    return {"extensions": len(exts), "h2": h2, "lemma_pairs": lemma_pairs}


async def run_sweep() -> dict:
    pairs = [(g, h) for g in NAMES for h in NAMES if order_of(g) * order_of(h) <= SWEEP_BOUND]
    results = []
    t0 = time.time()
    for g, h in pairs:
        print(f"  [{g} by {h}]")
        try:
            report = await classify(g, h, max(SWEEP_BOUND, 32))
        except ViolationFound as exc:
            fail(f"{g} by {h}: {exc} {exc.counterexample}")
        for oc in report.outer_classes:
            check(len(oc.members) == oc.zgroup_order, f"{g} by {h}: {len(oc.members)} members = |Ext(G,Z,E)|")
            check(oc.torsor_verified, f"{g} by {h}: torsor verified")
            check(oc.split_members == oc.delta_image, f"{g} by {h}: split locus = image of delta_E")
        results.append({"pair": [g, h], "report": report.model_dump(mode="json"), "oracle": oracle_checks(g, h)})
    return {"status": "ok", "bound": SWEEP_BOUND, "pairs": results, "latency_ms": int((time.time() - t0) * 1000)}


def main():
    print(f"Sweep over pairs with |G|*|H| <= {SWEEP_BOUND}")
    data = asyncio.run(run_sweep())
    Path(OUTPUT_PATH).parent.mkdir(parents=True, exist_ok=True)
    Path(OUTPUT_PATH).write_text(json.dumps(data, indent=2))
    print(f"\nWrote {OUTPUT_PATH} ({len(data['pairs'])} pairs)")


if __name__ == "__main__":
    main()
