import json

import pytest

from pframe.cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, run


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_energy_json(capsys):
    assert run(["energy", "--config", "icosahedron", "--p", "3"]) == EXIT_OK
    out = _json(capsys)
    assert abs(out["value"] - 0.241202265916660) < 1e-12


def test_energy_expect_mismatch(capsys):
    assert run(["energy", "--config", "icosahedron", "--p", "3", "--expect", "0.25"]) == EXIT_FAIL


def test_output_is_deterministic(capsys):
    run(["certify", "--config", "icosahedron", "--p", "3"])
    a = capsys.readouterr().out
    run(["certify", "--config", "icosahedron", "--p", "3"])
    b = capsys.readouterr().out
    assert a == b


def test_certify_emit_and_reverify(tmp_path, capsys):
    path = tmp_path / "cert.json"
    assert run(["certify", "--config", "e8-roots", "--p", "5", "--emit", str(path)]) == EXIT_OK
    capsys.readouterr()
    assert run(["certify", "--cert", str(path)]) == EXIT_OK
    assert _json(capsys)["verdict"] == "verified"


def test_tampered_certificate_is_falsified(tmp_path, capsys):
    path = tmp_path / "cert.json"
    run(["certify", "--config", "icosahedron", "--p", "3", "--emit", str(path)])
    capsys.readouterr()
    obj = json.loads(path.read_text())
    obj["h_jacobi"][1] = ["-0.001", "-0.001"]
    path.write_text(json.dumps(obj))
    assert run(["certify", "--cert", str(path)]) == EXIT_FAIL


def test_600cell_range_precondition_is_usage_error(capsys):
    assert run(["certify-600cell", "--range", "10.5", "11"]) == EXIT_USAGE


def test_600cell_point(capsys):
    assert run(["certify-600cell", "--p", "9"]) == EXIT_OK
    assert abs(float(_json(capsys)["bound"][0]) - 0.047015486159502) < 1e-10


def test_causal(capsys):
    assert run(["causal", "--which", "cross_polytope"]) == EXIT_OK


def test_bound_csv(capsys):
    assert run(["bound", "--space", "rp:3", "--p", "2", "--degree", "2", "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 and "verdict" in lines[0]


def test_catalog_table(capsys):
    assert run(["catalog", "--format", "table"]) == EXIT_OK
    assert "600-cell" in capsys.readouterr().out


def test_reproduce_quick_groups(capsys):
    assert run(["reproduce-tables", "--which", "census-85", "real-energies"]) == EXIT_OK
    assert _json(capsys)["failed"] == 0


def test_out_file(tmp_path):
    out = tmp_path / "e.json"
    assert run(["energy", "--config", "sic-3", "--p", "3", "--out", str(out)]) == EXIT_OK
    assert abs(json.loads(out.read_text())["value"] - 2 / 9) < 1e-12


@pytest.mark.parametrize("argv", [
    [],
    ["nonsense"],
    ["energy", "--p", "abc"],
    ["energy", "--config", "no-such", "--p", "3"],
    ["energy", "--config", "icosahedron"],
    ["bound", "--p", "3"],
    ["bound", "--space", "xx:3", "--p", "3"],
    ["certify", "--cert", "/nonexistent.json"],
    ["energy", "--config", "icosahedron", "--p", "-1"],
])
def test_usage_errors(argv, capsys):
    code = None
    try:
        code = run(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_USAGE


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE) == (0, 1, 2, 64)
