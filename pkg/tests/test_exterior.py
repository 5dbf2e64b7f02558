from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.exterior import (ExteriorAlgebra, ExteriorError, Form, FormParseError, basis_of_degree, contract,
                              merge_sign, operator_matrix, power, wedge)
from modules.model import zoo

ALG = ExteriorAlgebra(["e1", "e2", "e3", "e4"])


@st.composite
def homogeneous_forms(draw, ambient=4):
    k = draw(st.integers(min_value=0, max_value=ambient))
    basis = basis_of_degree(k, ambient)
    coeffs = draw(st.lists(st.integers(min_value=-3, max_value=3), min_size=len(basis), max_size=len(basis)))
    return Form.from_terms(ambient, zip(basis, coeffs)), k


def test_wedge_anticommutes_on_generators():
    e1, e2 = ALG.generator("e1"), ALG.generator("e2")
    assert wedge(e1, e2) == wedge(e2, e1).scale(-1)
    assert wedge(e1, e1).is_zero()


def test_kodaira_thurston_volume():
    omega = ALG.parse("e1^e3 + e2^e4")
    assert power(omega, 2) == Form.monomial(4, (0, 1, 2, 3), -2)


def test_merge_sign():
    assert merge_sign((0,), (1,)) == 1
    assert merge_sign((1,), (0,)) == -1
    assert merge_sign((0, 2), (1, 3)) == -1
    assert merge_sign((0, 1), (1,)) == 0


def test_coefficient_respects_order():
    f = ALG.parse("e1^e2")
    assert f.coefficient((0, 1)) == 1
    assert f.coefficient((1, 0)) == -1
    assert f.coefficient((0, 0)) == 0


def test_contract_sign():
    f = ALG.parse("e1^e2^e3")
    assert contract(1, f) == ALG.parse("-e1^e3")
    assert contract(0, f) == ALG.parse("e2^e3")
    assert contract(3, f).is_zero()


def test_render_and_parse():
    f = ALG.parse("3/2 e1^e3 - e2^e4")
    assert ALG.render(f) == "3/2 e1^e3 + -1 e2^e4"
    assert ALG.parse(ALG.render(f)) == f
    assert ALG.render(Form.zero(4)) == "0"
    assert ALG.render(Form.one(4).scale(5)) == "5"


def test_parse_variants():
    assert ALG.parse("2*e1") == ALG.parse("2 e1")
    assert ALG.parse("e2^e1") == ALG.parse("-e1^e2")
    assert ALG.parse("e1 + -1 e1").is_zero()
    assert ALG.parse("1/3") == Form.one(4).scale(Fraction(1, 3))


@pytest.mark.parametrize("text, position", [
    ("e1 ^", 4),
    ("e1 + e9", 5),
    ("e1 e2", 3),
    ("e1 $ e2", 3),
])
def test_parse_errors_report_position(text, position):
    with pytest.raises(FormParseError) as err:
        ALG.parse(text)
    assert err.value.position == position


def test_ambient_mismatch():
    with pytest.raises(ExteriorError):
        Form.one(3) + Form.one(4)


def test_operator_matrix_columns_follow_source_basis():
    omega = ALG.parse("e1^e2")
    m = operator_matrix(lambda f: wedge(omega, f), 1, 4, target_degree=3)
    assert m.shape == (4, 4)
    # e3 -> e1^e2^e3, the first degree-3 monomial
    assert m.column(2) == (1, 0, 0, 0)


def test_non_homogeneous_degree_raises():
    with pytest.raises(ExteriorError):
        _ = ALG.parse("1 + e1").degree


@pytest.mark.property
@settings(max_examples=80, deadline=None)
@given(homogeneous_forms(), homogeneous_forms())
def test_graded_commutativity(a, b):
    (fa, p), (fb, q) = a, b
    assert wedge(fa, fb) == wedge(fb, fa).scale((-1) ** (p * q))


@pytest.mark.property
@settings(max_examples=60, deadline=None)
@given(homogeneous_forms(), homogeneous_forms())
def test_leibniz_rule(a, b):
    m = zoo("kodaira_thurston")
    (fa, p), (fb, _) = a, b
    lhs = m.d(wedge(fa, fb))
    rhs = wedge(m.d(fa), fb) + wedge(fa, m.d(fb)).scale((-1) ** p)
    assert lhs == rhs
