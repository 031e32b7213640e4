import json
from importlib import resources

import jsonschema
import pytest

from minram import cli

SCHEMA = json.loads(resources.files("minram").joinpath("data/report.schema.json").read_text())

COMMANDS = [
    ["realize-sm", "--m", "4"],
    ["realize-sm", "--m", "6"],
    ["realize-smn", "--m", "4", "--n", "2"],
    ["realize-smn", "--m", "4", "--n", "2", "--mode", "additive"],
    ["universal-ram", "--m", "4", "--samples", "10", "--seed", "3"],
    ["groups", "check-ep", "--group", "S4", "--p", "2"],
    ["groups", "check-ep", "--gens", "(1,2,3,4);(1,3)", "--degree", "4", "--p", "2"],
    ["groups", "check-rigid", "--group", "S3", "--classes", "2,2,3"],
    ["groups", "product-tuple", "--group", "S3", "--classes", "2,2,3", "--n", "3"],
    ["groups", "product-tuple", "--group", "S3", "--classes", "2,2,3", "--group2", "S4", "--classes2", "2,3,4"],
    ["groups", "rigid-bound", "--r", "3", "--order", "120"],
    ["search", "beta-bound", "--degrees", "1,1,2"],
    ["search", "gtz", "--forms", "t; t - 2s", "--S", "2", "--N", "2"],
    ["search", "empirical-B", "--m", "4", "--S", "2,3"],
]


def _run(argv, capsys):
    code, report = cli.run(argv)
    capsys.readouterr()
    return code, report


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:3]))
def test_report_validates_and_verifies(argv, tmp_path, capsys):
    out = tmp_path / "report.json"
    code, report = _run(argv + ["-o", str(out)], capsys)
    assert code == cli.EXIT_OK
    on_disk = json.loads(out.read_text())
    jsonschema.validate(on_disk, SCHEMA)
    assert on_disk["schema_version"] == cli.SCHEMA_VERSION
    code, vreport = _run(["verify", str(out)], capsys)
    assert code == cli.EXIT_OK, vreport["result"]["errors"]
    assert vreport["result"]["verified"]
    jsonschema.validate(vreport, SCHEMA)


def test_tampered_report_fails_verify(tmp_path, capsys):
    out = tmp_path / "r.json"
    _run(["realize-sm", "--m", "4", "-o", str(out)], capsys)
    d = json.loads(out.read_text())
    fld = d["result"]["field"]
    fld["galois_cert"]["p_cycle"] = fld["galois_cert"]["p_irred"]
    out.write_text(json.dumps(d))
    code, report = _run(["verify", str(out)], capsys)
    assert code == cli.EXIT_VERIFY and not report["result"]["verified"]


def test_tampered_group_payload_fails_verify(tmp_path, capsys):
    out = tmp_path / "r.json"
    _run(["groups", "check-ep", "--group", "D4", "--p", "2", "-o", str(out)], capsys)
    d = json.loads(out.read_text())
    assert d["result"]["is_Ep"] is False
    d["result"]["is_Ep"] = True
    out.write_text(json.dumps(d))
    assert _run(["verify", str(out)], capsys)[0] == cli.EXIT_VERIFY


def test_usage_errors():
    for argv in (
        ["realize-sm", "--m", "3"],
        ["realize-smn", "--m", "4", "--n", "0"],
        ["groups", "check-ep", "--group", "S3"],
        ["nonsense"],
    ):
        assert cli.main(argv) == cli.EXIT_USAGE


def test_verify_unreadable_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["verify", str(bad)]) == cli.EXIT_USAGE
    assert cli.main(["verify", str(tmp_path / "missing.json")]) == cli.EXIT_USAGE


def test_search_exhausted_exit_code(capsys):
    assert cli.main(["search", "gtz", "--forms", "t; t - 2s", "--S", "2", "--max-candidates", "0"]) == cli.EXIT_EXHAUSTED
    assert cli.main(["realize-sm", "--m", "4", "--max-points", "0"]) == cli.EXIT_EXHAUSTED
    capsys.readouterr()


def test_undetermined_exit_code(capsys):
    argv = ["groups", "check-rigid", "--group", "S5", "--classes", "2,4,5", "--budget", "10"]
    assert cli.main(argv) == cli.EXIT_UNDETERMINED
    capsys.readouterr()


def _strip(report):
    return {k: v for k, v in report.items() if k != "wall_time"}


def test_deterministic_payload(capsys):
    argv = ["realize-smn", "--m", "4", "--n", "3"]
    a = _run(argv, capsys)[1]
    b = _run(argv, capsys)[1]
    assert _strip(a) == _strip(b)


def test_jobs_flag_does_not_change_payload(capsys):
    argv = ["search", "empirical-B", "--m", "4", "--S", "2,3"]
    one = _run(argv + ["--jobs", "1"], capsys)[1]
    two = _run(argv + ["--jobs", "2"], capsys)[1]
    assert one["result"] == two["result"]


def test_global_flags_either_side(capsys):
    a = _run(["--jobs", "1", "groups", "rigid-bound", "--r", "3", "--order", "6"], capsys)[1]
    b = _run(["groups", "rigid-bound", "--r", "3", "--order", "6", "--jobs", "1"], capsys)[1]
    assert a["result"] == b["result"] == {"bound": 5}


def test_single_factor_tower_matches_field(capsys):
    sm = _run(["realize-sm", "--m", "5"], capsys)[1]["result"]["field"]
    smn = _run(["realize-smn", "--m", "5", "--n", "1"], capsys)[1]["result"]["tower"]
    assert smn["factors"] == [sm]


def test_stdout_is_json(capsys):
    cli.main(["groups", "rigid-bound", "--r", "2", "--order", "2"])
    d = json.loads(capsys.readouterr().out)
    assert d["command"] == "groups rigid-bound" and d["result"] == {"bound": 3}


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-m", "minram", "search", "beta-bound", "--degrees", "1,1"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["result"]["bound"] >= 1
