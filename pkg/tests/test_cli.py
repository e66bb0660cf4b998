import csv
import io
import json
from pathlib import Path

import pytest

import cyclicat
from cyclicat.cli import main

SHIPPED = Path(cyclicat.__file__).parent / "data"
LOCAL = Path(__file__).parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def table_rows(text):
    return [line.split() for line in text.splitlines() if line and not line.startswith(("#", "note:"))]


def test_verify_builtin():
    code, out, _ = run("verify", "--builtin", "k", "--builtin", "T2", "--no-timestamp")
    assert code == 0
    assert "FAIL" not in out


def test_verify_shipped_files():
    code, out, _ = run("verify", SHIPPED / "dual_numbers.yaml", SHIPPED / "z2_swap.yaml")
    assert code == 0
    assert "phi commutes with all generators" in out


def test_verify_corrupted_algebra_exits_1():
    code, out, err = run("verify", LOCAL / "corrupt_algebra.yaml")
    assert code == 1
    assert "FAIL" in out


def test_missing_file_exits_2():
    code, _, err = run("verify", LOCAL / "no_such_file.yaml")
    assert code == 2 and "cannot read" in err
    assert run("hc", LOCAL / "not_yaml.yaml")[0] == 2


def test_bad_arguments_exit_2():
    assert run("hc", "--method", "nope")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("hc")[0] == 2


def test_hc_of_k():
    code, out, _ = run("hc", "--builtin", "k", "--max-degree", "5", "--no-timestamp")
    assert code == 0
    rows = table_rows(out)
    assert rows[0] == ["degree", "HH", "HC_connes", "HC_bicomplex", "HC_mixed", "agree"]
    assert [r[2] for r in rows[1:]] == ["1", "0", "1", "0", "1"]
    assert all(r[-1] == "yes" for r in rows[1:])
    assert "note: methods agree in every degree" in out


def test_hc_from_file_single_method():
    code, out, _ = run("hc", SHIPPED / "dual_numbers.yaml", "--method", "mixed", "--max-degree", "4")
    assert code == 0
    assert [r[2] for r in table_rows(out)[1:]] == ["2", "0", "2", "0"]


def test_budget_exceeded_exits_3():
    code, _, err = run("hc", "--builtin", "T2", "--max-degree", "10", "--budget-mb", "0.01")
    assert code == 3 and "budget" in err


def test_charmap_trivial_echoes_the_trace():
    code, out, _ = run("charmap", SHIPPED / "trivial_action.yaml",
                       "--xi", SHIPPED / "trivial_xi0.yaml", "--nu", SHIPPED / "trivial_trace.yaml",
                       "--output", "json", "--no-timestamp")
    assert code == 0
    report = json.loads(out)
    assert {r["argument"]: r["value"] for r in report["rows"]} == {"e1": "1", "e2": "2"}
    assert report["certificates"]["closure"] == {"b_closed": True, "cyclic_invariant": True}


def test_charmap_z2_degree_two_with_probes():
    code, out, _ = run("charmap", SHIPPED / "z2_swap.yaml", "--xi", SHIPPED / "z2_xi2.yaml",
                       "--nu", SHIPPED / "z2_trace.yaml", "--probe-trials", "5", "--s-probe",
                       "--output", "json", "--no-timestamp")
    assert code == 0
    report = json.loads(out)
    assert report["rows"]
    assert report["certificates"]["descent"] == {"trials": 5, "passed": 5, "verdict": True}
    assert report["certificates"]["S_compatibility"] == {"verdict": True}


def test_charmap_degree_zero_swap():
    code, out, _ = run("charmap", SHIPPED / "z2_swap.yaml", "--xi", SHIPPED / "z2_xi0.yaml",
                       "--nu", SHIPPED / "z2_trace.yaml")
    assert code == 0
    assert table_rows(out)[1:] == [["e1", "1"], ["e2", "1"]]


def test_charmap_zero_output_is_noted(tmp_path):
    # the closed invariant degree-1 cochains of kZ/2 are zero
    xi = tmp_path / "xi.yaml"
    xi.write_text("kind: cocycle\nside: coalgebra\ndegree: 1\nvector: [0, 0, 0, 0]\n")
    code, out, _ = run("charmap", SHIPPED / "z2_swap.yaml", "--xi", xi, "--nu", SHIPPED / "z2_trace.yaml")
    assert code == 0
    assert "note: output cochain is zero" in out
    assert '"b_closed": true' in out


def test_charmap_rejects_non_cocycle():
    code, _, err = run("charmap", SHIPPED / "z2_swap.yaml", "--xi", LOCAL / "xi_not_closed.yaml",
                       "--nu", SHIPPED / "z2_trace.yaml")
    assert code == 1 and "violation" in err


@pytest.mark.parametrize("expr,expected", [
    ("s1_0 . d1_0", "id_1"),
    ("t2 . t2 . t2", "id_2"),
    ("d1_0 . t1^1", "t2^1 . d1_1"),
])
def test_compose_examples(expr, expected):
    code, out, _ = run("compose", expr, "--output", "json")
    assert code == 0
    assert json.loads(out)["rows"][0]["normal_form"] == expected


def test_compose_non_composable_and_parse_error():
    code, out, _ = run("compose", "d1_0 . d1_0")
    assert code == 0 and "NonComposable" in out
    assert run("compose", "x1_0")[0] == 2


def test_no_timestamp_is_reproducible():
    args = ("hc", "--builtin", "kZ/2", "--max-degree", "4", "--no-timestamp")
    assert run(*args)[1] == run(*args)[1]
    assert "timestamp" not in run(*args)[1]
    assert "# timestamp" in run("compose", "t1")[1]


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("CYCLICAT_MAX_DEGREE", "3")
    monkeypatch.setenv("CYCLICAT_OUTPUT", "json")
    code, out, _ = run("hc", "--builtin", "k")
    assert code == 0
    assert [r["degree"] for r in json.loads(out)["rows"]] == [0, 1, 2]
    # the command line wins over the environment
    code, out, _ = run("hc", "--builtin", "k", "--max-degree", "2", "--output", "table")
    assert len(table_rows(out)) == 3
    monkeypatch.setenv("CYCLICAT_MAX_DEGREE", "many")
    assert run("hc", "--builtin", "k")[0] == 2


def test_csv_output():
    code, out, _ = run("charmap", SHIPPED / "trivial_action.yaml", "--xi", SHIPPED / "trivial_xi0.yaml",
                       "--nu", SHIPPED / "trivial_trace.yaml", "--output", "csv")
    assert code == 0
    body = [line for line in out.splitlines() if not line.startswith("#")]
    rows = list(csv.DictReader(body))
    assert rows == [{"argument": "e1", "value": "1"}, {"argument": "e2", "value": "2"}]


def test_fractions_are_strings_in_json(tmp_path):
    nu = tmp_path / "nu.yaml"
    nu.write_text('kind: cocycle\nside: algebra\ndegree: 0\nvector: ["1/2", "-3/4"]\n')
    code, out, _ = run("charmap", SHIPPED / "trivial_action.yaml", "--xi", SHIPPED / "trivial_xi0.yaml",
                       "--nu", nu, "--output", "json")
    assert code == 0
    assert [r["value"] for r in json.loads(out)["rows"]] == ["1/2", "-3/4"]
