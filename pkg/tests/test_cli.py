import json

from app.core.catalog import cyclic
from app.core.documents import extension_to_document
from app.core.extensions import make_extension
from app.core.groups import GroupHom, direct_product
from app.main import EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE, run_cli


def write_extension(tmp_path, name, E):
    path = tmp_path / name
    path.write_text(extension_to_document(E).model_dump_json())
    return str(path)


def z4_extension():
    C2, C4 = cyclic(2), cyclic(4)
    return make_extension(C2, C4, C2, GroupHom(C2, C4, (0, 2)), GroupHom(C4, C2, (0, 1, 0, 1)))


def v4_extension():
    C2 = cyclic(2)
    dp = direct_product(C2, C2)
    return make_extension(C2, dp.group, C2, dp.injections[1], dp.projections[0])


def test_classify_json(capsys):
    assert run_cli(["classify", "C2", "C2", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["extension_count"] == 2
    assert "timing" in data and data["timing"] is None


def test_classify_text(capsys):
    assert run_cli(["classify", "C2", "C3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "extension_count: 2" in out


def test_enumerate_lists_every_extension(capsys):
    assert run_cli(["enumerate", "C2", "C4", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert len(data["extensions"]) == 4
    assert sum(1 for e in data["extensions"] if e["split"]) == 2


def test_torsor_check(capsys):
    assert run_cli(["torsor-check", "C2", "C2", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["classes"][0]["free"] and data["classes"][0]["transitive"]


def test_usage_errors():
    assert run_cli(["classify"]) == EXIT_USAGE
    assert run_cli(["nonsense"]) == EXIT_USAGE


def test_failed_preconditions(capsys):
    assert run_cli(["enumerate", "C4", "C4", "--bound", "8"]) == EXIT_PRECONDITION
    assert run_cli(["classify", "X9", "C2"]) == EXIT_PRECONDITION
    assert "error:" in capsys.readouterr().err


def test_aut_and_split_from_files(tmp_path, capsys):
    path = write_extension(tmp_path, "z4.json", z4_extension())
    assert run_cli(["aut", path, "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 2 and data["crossed_count"] == 2
    assert run_cli(["split", path, "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"split": False, "section": None}


def test_diff_and_act_from_files(tmp_path, capsys):
    z4 = write_extension(tmp_path, "z4.json", z4_extension())
    v4 = write_extension(tmp_path, "v4.json", v4_extension())
    assert run_cli(["diff", z4, v4, "--format", "json"]) == EXIT_OK
    diffed = json.loads(capsys.readouterr().out)
    assert diffed["sub"]["cayley"] == [[0, 1], [1, 0]]
    assert len(diffed["total"]["cayley"]) == 4
    assert run_cli(["act", z4, z4, "--format", "json"]) == EXIT_OK
    assert "total" in json.loads(capsys.readouterr().out)


def test_missing_file_is_a_usage_error(tmp_path):
    assert run_cli(["aut", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_undecodable_file_is_a_failed_precondition(tmp_path, capsys):
    path = tmp_path / "binary.json"
    path.write_bytes(b"\xff\xfe\x00{")
    assert run_cli(["split", str(path)]) == EXIT_PRECONDITION
    assert "not UTF-8" in capsys.readouterr().err
