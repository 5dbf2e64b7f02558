import json

import pytest

from model_manager import ModelManager
from modules.model import (ModelError, ModelParseError, ModelValidationError, UnknownModelError, boothby_wang_extend,
                           load_model, model_to_dict, model_to_text, validation_report, zoo, zoo_names)
from tests.conftest import ZOO_SAMPLE

HEISENBERG_TEXT = """
# comment lines are ignored
generators: e1 e2 e3
d: e3 = e1^e2
foliation: e3
eta: e3
omega: e1^e2
"""


def test_load_heisenberg():
    m = load_model(HEISENBERG_TEXT, "h")
    assert m.generators == ("e1", "e2", "e3")
    assert m.is_contact
    assert m.n == 1
    assert m.transverse == (0, 1)
    assert m.basic_complex.dims() == [1, 2, 1]
    assert m.full_complex.dims() == [1, 3, 3, 1]


def test_d_squared_violation_names_rule():
    text = "generators: e1 e2 e3 e4\nd: e3 = e1^e2\nd: e4 = e3^e4\nomega: e1^e2 + e3^e4\n"
    with pytest.raises(ModelValidationError) as err:
        load_model(text)
    assert err.value.rule == "d²(e4) ≠ 0"


@pytest.mark.parametrize("text, rule", [
    ("generators: e1 e2 e3\nomega: e1^e2\n", "transverse dimension"),
    ("generators: e1 e2\nomega: e1\n", "ω degree"),
    ("generators: e1 e2 e3\nfoliation: e3\nomega: e1^e3 + e2^e3\n", "ω not transverse"),
    ("generators: e1 e2 e3 e4\nd: e3 = e1^e2\nomega: e1^e2 + e3^e4\n", "dω ≠ 0"),
    ("generators: e1 e2 e3 e4\nomega: e1^e2\n", "ω^n = 0"),
    ("generators: e1 e2 e3\nd: e1 = e2^e3\nfoliation: e3\nomega: e1^e2\n", "invariance"),
    ("generators: e0 e1 e2\nfoliation: e0\neta: e0\nomega: e1^e2\n", "dη ≠ ω"),
])
def test_validation_rules(text, rule):
    with pytest.raises(ModelValidationError) as err:
        load_model(text)
    assert err.value.rule == rule


def test_parse_error_has_line_and_column():
    with pytest.raises(ModelParseError) as err:
        load_model("generators: e1 e2\nomega: e1^e7\n")
    assert err.value.line == 2
    assert err.value.column == 11


def test_unknown_key():
    with pytest.raises(ModelParseError):
        load_model("generators: e1 e2\ncolour: red\nomega: e1^e2\n")


def test_json_round_trip():
    m = zoo("kt_contact5")
    again = load_model(json.dumps(model_to_dict(m)))
    assert model_to_text(again) == model_to_text(m)


def test_unknown_zoo_name():
    with pytest.raises(UnknownModelError):
        zoo("klein_bottle")


def test_zoo_parametric_names():
    assert zoo("torus2n(2)").n == 2
    assert zoo("torus(6)").n == 3
    assert zoo("torus4").name == "torus4"


def test_torus_contact_is_rejected():
    with pytest.raises(ModelValidationError) as err:
        zoo("torus_contact3")
    assert err.value.rule == "dη ≠ ω"


@pytest.mark.parametrize("name", ZOO_SAMPLE)
def test_zoo_models_have_d_squared_zero(name):
    report = validation_report(zoo(name))
    assert report.passed
    assert all(row["d2_zero"] and row["inclusion_commutes"] for row in report.per_degree)


def test_boothby_wang_of_t2_is_heisenberg():
    bw = boothby_wang_extend(zoo("torus2"))
    assert bw.name == "bw_torus2"
    assert bw.generators == ("e0", "e1", "e2")
    assert bw.eta == 0
    assert bw.render(bw.base.d_generator(0)) == "1 e1^e2"


def test_boothby_wang_recovers_base_complex():
    base = zoo("kodaira_thurston")
    total = zoo("kt_contact5")
    assert total.basic_complex.dims() == base.full_complex.dims()
    for k in range(5):
        assert total.basic_complex.differential(k) == base.full_complex.differential(k)


def test_boothby_wang_needs_symplectic_base():
    with pytest.raises(ModelError):
        boothby_wang_extend(zoo("heisenberg3"))


def test_omega_is_basic_and_closed():
    for name in ZOO_SAMPLE:
        m = zoo(name)
        assert m.is_basic(m.omega)
        assert m.d(m.omega).is_zero()


def test_zoo_names_all_load():
    for name in zoo_names():
        assert zoo(name).name == name


def test_model_manager_resolves_and_caches(tmp_path):
    manager = ModelManager()
    first = manager.resolve("zoo:heisenberg3")
    assert manager.resolve("zoo:heisenberg3") is first
    assert manager.resolve("heisenberg3.model").basic_complex.dims() == [1, 2, 1]
    with pytest.raises(FileNotFoundError):
        manager.resolve(str(tmp_path / "missing.model"))


def test_model_manager_save(tmp_path):
    manager = ModelManager()
    m = zoo("bw_torus4")
    for path in (tmp_path / "bw.model", tmp_path / "bw.json"):
        manager.save(m, str(path))
        loaded = manager.resolve(str(path))
        assert model_to_dict(loaded) == model_to_dict(m)
