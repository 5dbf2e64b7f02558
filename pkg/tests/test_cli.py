import io
import json

import pytest

from main import EXIT_INCONSISTENT, EXIT_MODEL, EXIT_OK, EXIT_USAGE, run
from modules.model import load_model


def run_capture(argv):
    out = io.StringIO()
    code = run(argv, stdout=out)
    return code, out.getvalue()


def test_suite_on_heisenberg_passes():
    code, out = run_capture(["suite", "zoo:heisenberg3", "--samples", "5"])
    assert code == EXIT_OK
    assert "[FAIL]" not in out


@pytest.mark.parametrize("name", ["torus4", "kodaira_thurston"])
def test_suite_on_four_dimensional_models(name):
    code, out = run_capture(["suite", f"zoo:{name}", "--samples", "2"])
    assert code == EXIT_OK
    assert "[FAIL]" not in out


def test_lefschetz_json_on_kodaira_thurston():
    code, out = run_capture(["lefschetz", "zoo:kodaira_thurston", "--json"])
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["schema_version"] == 1
    assert data["command"] == "lefschetz"
    first = data["reports"][0]
    assert first["checker"] == "transverse_lefschetz"
    assert first["max_s"] == 0
    assert first["witnesses"]


def test_validate_bad_model_names_rule(capsys):
    code = run(["validate", "bad_d2.model"], stdout=io.StringIO())
    assert code == EXIT_MODEL
    assert "d²(e4) ≠ 0" in capsys.readouterr().err


def test_validate_good_model():
    code, out = run_capture(["validate", "heisenberg3.model"])
    assert code == EXIT_OK
    assert "validation on heisenberg3" in out


def test_missing_file_is_a_model_error():
    code, _ = run_capture(["validate", "no_such.model"])
    assert code == EXIT_MODEL


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate", "zoo:torus2"],
    ["cohomology"],
    ["hodge", "zoo:torus2", "--seed", "abc"],
    ["hodge", "zoo:torus2", "--export", "out.txt"],
])
def test_usage_errors(argv):
    code, _ = run_capture(argv)
    assert code == EXIT_USAGE


def test_unknown_zoo_model():
    code, _ = run_capture(["cohomology", "zoo:klein_bottle"])
    assert code == EXIT_MODEL


def test_cohomology_tables():
    code, out = run_capture(["cohomology", "zoo:heisenberg3", "--derham", "--json"])
    rows = json.loads(out)["reports"][0]["per_degree"]
    assert code == EXIT_OK
    assert [row["derham"] for row in rows] == [1, 2, 2, 1]
    assert all("basic" not in row for row in rows)


def test_max_degree_trims_rows():
    _, out = run_capture(["cohomology", "zoo:torus4", "--json", "--max-degree", "1"])
    assert [row["degree"] for row in json.loads(out)["reports"][0]["per_degree"]] == [0, 1]


def test_json_output_is_deterministic():
    argv = ["hodge", "zoo:kodaira_thurston", "--json", "--seed", "9", "--samples", "3"]
    first = run_capture(argv)
    second = run_capture(argv)
    assert first == second
    assert json.loads(first[1])["reports"][0]["seed"] == 9


def test_cup_on_contact_model():
    code, out = run_capture(["cup", "zoo:heisenberg3", "--json"])
    reports = {r["checker"]: r for r in json.loads(out)["reports"]}
    assert code == EXIT_OK
    assert reports["cup_length"]["details"]["cup_length"] == 2
    assert "sasakian_obstructions" in reports


def test_ddlemma_command():
    code, out = run_capture(["ddlemma", "zoo:kodaira_thurston", "--json", "--samples", "3"])
    reports = {r["checker"]: r for r in json.loads(out)["reports"]}
    assert code == EXIT_OK
    assert reports["dd_lemma"]["max_s"] == 0
    assert reports["lefschetz_dd_equivalence"]["status"] == "pass"


def test_boothby_wang_writes_loadable_file(tmp_path):
    target = tmp_path / "bw.model"
    code, out = run_capture(["boothby-wang", "zoo:torus4", "-o", str(target)])
    assert code == EXIT_OK
    m = load_model(target.read_text(encoding="utf-8"))
    assert m.is_contact and m.name == "bw_torus4"
    code, out = run_capture(["cohomology", str(target), "--derham", "--json"])
    assert [row["derham"] for row in json.loads(out)["reports"][0]["per_degree"]] == [1, 4, 5, 5, 4, 1]


def test_boothby_wang_on_foliated_base():
    code, _ = run_capture(["boothby-wang", "zoo:heisenberg3"])
    assert code == EXIT_MODEL


def test_models_lists_zoo():
    code, out = run_capture(["models", "--json"])
    names = [row["name"] for row in json.loads(out)["reports"][0]["per_degree"]]
    assert code == EXIT_OK
    assert "kt_contact5" in names


def test_export_csv(tmp_path):
    path = tmp_path / "lef.csv"
    code, _ = run_capture(["lefschetz", "zoo:torus4", "--export", str(path)])
    assert code == EXIT_OK
    assert path.read_text(encoding="utf-8").startswith("model,checker")


def test_failed_check_exit_code(monkeypatch):
    from modules.cohomology import CohomologyModule

    original = CohomologyModule.lefschetz_dd_equivalence_check

    def broken(self):
        report = original(self)
        report.fail("forced")
        return report

    monkeypatch.setattr(CohomologyModule, "lefschetz_dd_equivalence_check", broken)
    code, out = run_capture(["ddlemma", "zoo:torus2", "--samples", "1"])
    assert code == EXIT_INCONSISTENT
    assert "failure: forced" in out
