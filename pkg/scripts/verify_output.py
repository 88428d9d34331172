import json
import sys
from pathlib import Path

REQUIRED_TOP_LEVEL = ["status", "bound", "pairs"]


def fail(msg: str):
    print(f"VERIFY_FAIL: {msg}")
    sys.exit(1)


def main():
    if len(sys.argv) != 2:
        fail("Usage: verify_output.py <artifacts/sweep_output.json>")

    path = Path(sys.argv[1])
    if not path.exists():
        fail(f"File not found: {path}")

    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except Exception as e:
        fail(f"Invalid JSON: {e}")

    for k in REQUIRED_TOP_LEVEL:
        if k not in data:
            fail(f"Missing top-level key: {k}")

    if data["status"] != "ok":
        fail(f"status is {data['status']!r}: {data.get('reason')}")

    pairs = data["pairs"]
    if not isinstance(pairs, list) or not pairs:
        fail("pairs must be a non-empty list")

    seen = {}
    for i, item in enumerate(pairs):
        report = item.get("report")
        if not isinstance(report, dict):
            fail(f"pairs[{i}].report must be an object")
        classes = report.get("outer_classes", [])
        total = sum(len(oc["members"]) for oc in classes)
        if total != report.get("extension_count"):
            fail(f"pairs[{i}]: outer classes cover {total} of {report.get('extension_count')} extensions")
        for j, oc in enumerate(classes):
            if len(oc["members"]) != oc["zgroup_order"]:
                fail(f"pairs[{i}].outer_classes[{j}]: member count differs from zgroup order")
            if not oc["torsor_verified"]:
                fail(f"pairs[{i}].outer_classes[{j}]: torsor not verified")
            if sorted(oc["split_members"]) != sorted(oc["delta_image"]):
                fail(f"pairs[{i}].outer_classes[{j}]: split locus differs from delta image")
        seen[tuple(item["pair"])] = report["extension_count"]

    expected = {("C2", "C2"): 2, ("V4", "C2"): 8, ("C2", "S3"): 1}
    for pair, count in expected.items():
        if pair in seen and seen[pair] != count:
            fail(f"{pair} has {seen[pair]} extensions, expected {count}")

    print(f"VERIFY_OK: {len(pairs)} pairs")


if __name__ == "__main__":
    main()
