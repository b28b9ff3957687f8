from __future__ import annotations

import json
from pathlib import Path

import pytest

from opecalc import cli
from suites import GOLDEN, run_cli

HERE = Path(__file__).parent


@pytest.fixture(autouse=True)
def _in_tests_dir(monkeypatch):
    monkeypatch.chdir(HERE)
    monkeypatch.delenv("OPECALC_THREADS", raising=False)


def call(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ope_golden(capsys):
    code, out, _ = call(capsys, "ope", "catalog:virasoro", "L", "L")
    assert code == 0 and out == (GOLDEN / "ope_virasoro_LL.txt").read_text()


def test_character_golden(capsys):
    code, out, _ = call(capsys, "character", "catalog:heisenberg", "--cutoff", "6")
    assert code == 0 and out == (GOLDEN / "character_heisenberg_6.txt").read_text()


def test_verify_json_golden(capsys):
    code, out, _ = call(capsys, "verify", "fixtures/heisenberg.spec", "--cutoff", "2",
                        "--indices=-2..2", "--format", "json")
    assert code == 0
    assert json.loads(out) == json.loads((GOLDEN / "verify_heisenberg_2.json").read_text())


def test_spec_file_ope_uses_its_central_charge(capsys):
    code, out, _ = call(capsys, "ope", "fixtures/virasoro_c1.spec", "L", "L")
    assert code == 0 and out.startswith("(1/2)k/(z-w)^4")


def test_failed_axiom_exits_1_with_witness(capsys):
    code, out, _ = call(capsys, "verify", "fixtures/broken.spec", "--cutoff", "2", "--indices=-2..2")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("argv", [
    ("verify", "fixtures/malformed.spec"),
    ("verify", "fixtures/nosuch.spec"),
    ("verify", "catalog:heisenberg", "--indices=3..1"),
    ("verify", "catalog:heisenberg", "--indices=x"),
    ("verify", "catalog:nosuch"),
    ("ope", "catalog:heisenberg", "q", "a"),
    ("frobnicate",),
    (),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2 and err


def test_bad_thread_count_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("OPECALC_THREADS", "zero")
    code, _, err = call(capsys, "verify", "catalog:heisenberg", "--cutoff", "1")
    assert code == 2 and "OPECALC_THREADS" in err


def test_catalog_listing(capsys):
    code, out, _ = call(capsys, "catalog", "--format", "json")
    names = {row["name"] for row in json.loads(out)}
    assert code == 0 and {"heisenberg", "virasoro", "toroidal_tensor", "poly_comm"} <= names


def test_character_json(capsys):
    code, out, _ = call(capsys, "character", "catalog:virasoro", "--cutoff", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["character"] == {"0": 1, "1": 0, "2": 1, "3": 1, "4": 2}


def test_tensor_ope(capsys):
    code, out, _ = call(capsys, "ope", "catalog:toroidal_tensor", "a|a", "a|a")
    assert code == 0 and out.startswith("k(x)k/(z-w)^2(zbar-wbar)^2")
    code, out, _ = call(capsys, "ope", "catalog:toroidal_tensor", "a|1", "1|a")
    assert code == 0 and out.strip() == "regular"


def test_commutative_ope_is_regular(capsys):
    assert call(capsys, "ope", "catalog:poly_comm", "x", "x")[1].strip() == "regular"


def test_module_entry_point_exit_codes():
    assert run_cli("catalog")[0] == 0
    assert run_cli("verify", "fixtures/malformed.spec")[0] == 2
