"""Command-line interface: subcommands, formats, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from kirbycalc.cli import main

CMD = [sys.executable, "-m", "kirbycalc.cli"]


def run(args):
    return subprocess.run(
        CMD + args, capture_output=True, text=True, timeout=120
    )


def test_invariant_group_table_format():
    r = run(["invariant", "--library", "S1xS1xS2", "--backend", "group",
             "--group", "S3"])
    assert r.returncode == 0
    assert "value          18" in r.stdout


def test_invariant_pointed_json():
    r = run(["invariant", "--library", "S2xS2", "--backend", "pointed",
             "--factors", "5", "--anyonic", "--format", "json"])
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert abs(data["value"][0] - 0.2) < 1e-9
    assert abs(data["value"][1]) < 1e-9


def test_invariant_templieb():
    r = run(["invariant", "--library", "S1xS3", "--backend", "templieb",
             "--r", "4", "--functor", "integer-spins", "--format", "json"])
    assert r.returncode == 0
    assert abs(json.loads(r.stdout)["value"][0] - 2) < 1e-6


def test_output_is_byte_stable():
    args = ["invariant", "--library", "CP2", "--backend", "pointed",
            "--factors", "5", "--anyonic", "--format", "json"]
    assert run(args).stdout == run(args).stdout


def test_table_csv():
    r = run(["table", "--backend", "group", "--group", "S3", "--format", "csv"])
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "name,chi,sigma,value,expected,status"
    row = dict((l.split(",")[0], l) for l in lines[1:])
    assert row["S1xS1xS2"].split(",")[3] == "18"
    assert "MISMATCH" not in r.stdout


def test_table_jobs_deterministic():
    a = run(["table", "--backend", "pointed", "--factors", "5", "--anyonic",
             "--format", "csv"])
    b = run(["table", "--backend", "pointed", "--factors", "5", "--anyonic",
             "--format", "csv", "--jobs", "4"])
    assert a.stdout == b.stdout


def test_check_moves_exit_zero():
    r = run(["check-moves", "--backend", "group", "--group", "S3",
             "--trials", "10", "--seed", "3"])
    assert r.returncode == 0
    assert "overall" in r.stdout


def test_pi1_with_hom_count():
    r = run(["pi1", "--library", "IxRP3double", "--group", "S3"])
    assert r.returncode == 0
    assert "homomorphisms to S3: 4" in r.stdout


def test_library_list_and_export_roundtrip(tmp_path):
    r = run(["library", "list"])
    assert r.returncode == 0 and "S1xS1xS2" in r.stdout
    out = tmp_path / "d.kdf"
    r = run(["library", "export", "S2xS2", "--out", str(out)])
    assert r.returncode == 0
    r2 = run(["invariant", "--diagram", str(out), "--backend", "group",
              "--group", "S3", "--format", "json"])
    assert r2.returncode == 0
    assert json.loads(r2.stdout)["value"] == [1.0, 0.0]


def test_validate_rejects_bad_target():
    r = run(["validate", "--backend", "pointed", "--factors", "2", "--anyonic"])
    assert r.returncode == 2
    assert "problem" in r.stdout


def test_validate_accepts_modular_target():
    r = run(["validate", "--backend", "pointed", "--factors", "5", "--anyonic",
             "--library", "S4"])
    assert r.returncode == 0
    assert "(modular)" in r.stdout


def test_unknown_library_exit_2():
    r = run(["invariant", "--library", "nope", "--backend", "group",
             "--group", "S3"])
    assert r.returncode == 2
    err = json.loads(r.stderr)
    assert err["error"] == "UnknownManifold"


def test_resource_limit_exit_3():
    r = run(["invariant", "--library", "S2xS2", "--backend", "templieb",
             "--r", "4", "--skein-cap", "3"])
    assert r.returncode == 3
    assert json.loads(r.stderr)["error"] == "ResourceLimit"


def test_main_callable_directly(capsys):
    code = main(["invariant", "--library", "S4", "--backend", "group",
                 "--group", "S3"])
    assert code == 0
    assert "value          1" in capsys.readouterr().out
