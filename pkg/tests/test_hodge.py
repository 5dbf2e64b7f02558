from fractions import Fraction

import pytest

from modules.exterior import Form
from modules.hodge import HodgeError, HodgeModule
from modules.model import zoo
from tests.conftest import ZOO_SAMPLE
from utils import make_rng

_hodge = {}


def hodge(name):
    if name not in _hodge:
        _hodge[name] = HodgeModule(zoo(name))
    return _hodge[name]


def test_darboux_pairing_and_star():
    h = hodge("torus2")
    e1, e2 = h.model.parse("e1"), h.model.parse("e2")
    assert h.pairing_B(e1, e2) == 1
    assert h.pairing_B(e2, e1) == -1
    assert h.star(e1) == e1
    assert h.star(Form.one(2)) == h.model.omega
    assert h.star(h.model.omega) == Form.one(2)


def test_volume_of_kodaira_thurston():
    m = zoo("kodaira_thurston")
    assert m.volume == m.parse("-e1^e2^e3^e4")


@pytest.mark.parametrize("name", ZOO_SAMPLE)
def test_star_squared_is_identity(name):
    h = hodge(name)
    assert h.op_star.compose(h.op_star).failing_degrees(h.identity()) == []


@pytest.mark.parametrize("name", ZOO_SAMPLE)
def test_sl2_and_commutator_identities(name):
    h = hodge(name)
    assert h.op_Lambda.commutator(h.op_L).failing_degrees(h.op_H) == []
    assert h.op_d.commutator(h.op_Lambda).failing_degrees(h.op_delta) == []
    assert h.op_delta.commutator(h.op_L).failing_degrees(h.op_d) == []
    d_delta = h.op_d.compose(h.op_delta)
    assert d_delta.commutator(h.op_L).failing_degrees() == []
    assert d_delta.commutator(h.op_Lambda).failing_degrees() == []


def test_lambda_of_omega_is_n():
    h = hodge("torus4")
    assert h.Lambda(h.model.omega) == Form.one(4).scale(2)


def test_delta_of_e4_on_kodaira_thurston():
    h = hodge("kodaira_thurston")
    e4 = h.model.parse("e4")
    assert h.delta(e4).is_zero()
    a = h.model.parse("e1^e2 + 2 e3")
    assert h.delta(a, printed_sign=True) == h.delta(a).scale(-1)


def test_primitivity():
    h = hodge("torus4")
    assert h.is_primitive(h.model.parse("e1"))
    assert h.is_primitive(h.model.parse("e1^e3"))
    assert h.is_primitive(h.model.parse("e1^e2 - e3^e4"))
    assert not h.is_primitive(h.model.omega)
    with pytest.raises(HodgeError):
        h.is_primitive(h.model.parse("e1^e2^e3"))


def test_non_basic_form_is_rejected():
    h = hodge("heisenberg3")
    with pytest.raises(HodgeError):
        h.star(h.model.parse("e3"))


def test_lefschetz_decomposition_of_omega():
    h = hodge("torus4")
    assert h.lefschetz_decompose(h.model.omega) == [(1, Form.one(4))]


def test_lefschetz_decomposition_of_a_plane():
    h = hodge("torus4")
    a = h.model.parse("e1^e2")
    parts = h.lefschetz_decompose(a)
    half = Fraction(1, 2)
    assert parts == [(0, h.model.parse("e1^e2 - e3^e4").scale(half)), (1, Form.one(4).scale(half))]
    assert h.recompose(parts) == a
    assert h.lefschetz_decompose(a, reverse=True) == parts


def test_decomposition_of_volume_form():
    h = hodge("torus4")
    assert h.lefschetz_decompose(h.model.volume) == [(2, Form.one(4))]
    kt = hodge("kodaira_thurston")
    assert kt.lefschetz_decompose(kt.model.volume) == [(2, Form.one(4))]


@pytest.mark.parametrize("name", ["torus4", "kodaira_thurston", "cosymplectic_t5"])
def test_decomposition_round_trips_in_every_degree(name):
    h = hodge(name)
    rng = make_rng(5)
    for k in range(h.size + 1):
        for _ in range(3):
            a = h.random_form(rng, k)
            parts = h.lefschetz_decompose(a)
            assert h.recompose(parts) == a
            assert parts == h.lefschetz_decompose(a, reverse=True)
            assert all(h.is_primitive(beta) and beta.degree == k - 2 * r for r, beta in parts)


def test_identity_report_on_torus4():
    report = hodge("torus4").identity_report(seed=2, samples=2)
    assert report.passed, report.details.get("failures")
    assert report.details["decomposition_mismatches"] == 0


def test_weil_identity_on_random_primitives():
    h = hodge("torus4")
    rng = make_rng(7)
    for _ in range(30):
        for k in range(3):
            a = h.random_primitive(rng, k)
            for r in range(2 - k + 1):
                assert h.weil_star(a, r) == h.star(h.apply(h.L_power(r), a))


def test_weil_rejects_non_primitive():
    h = hodge("torus4")
    with pytest.raises(HodgeError):
        h.weil_star(h.model.omega, 0)


def test_lambda_matches_contraction_formula():
    h = hodge("kodaira_thurston")
    assert h.op_Lambda_contractions().failing_degrees(h.op_Lambda) == []


@pytest.mark.slow
@pytest.mark.parametrize("name", ZOO_SAMPLE)
def test_identity_report_passes(name):
    report = hodge(name).identity_report(seed=11, samples=5)
    assert report.passed, report.details.get("failures")
    assert report.seed == 11
    assert report.details["delta_sign"] == "(-1)^k"


def test_identity_report_is_deterministic():
    h = hodge("heisenberg3")
    assert h.identity_report(seed=3, samples=4).to_dict() == h.identity_report(seed=3, samples=4).to_dict()
