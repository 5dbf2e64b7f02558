import pytest

from modules.contact import (MAP_TAG, ContactError, ContactModule, cup_length, gysin_bookkeeping,
                             boothby_wang_lefschetz_check)
from modules.model import zoo
from tests.conftest import CONTACT_SAMPLE, get_cohomology, get_model


def contact(name):
    return ContactModule(get_model(name), get_cohomology(name))


@pytest.mark.parametrize("name", CONTACT_SAMPLE)
def test_long_exact_sequence_is_exact(name):
    report = contact(name).long_exact_sequence()
    assert report.exact, [s for s in report.stages if not s["exact"]]
    assert report.to_check_report().passed


@pytest.mark.parametrize("name", CONTACT_SAMPLE)
def test_basic_pairing_is_nondegenerate(name):
    c = contact(name)
    for r in range(2 * c.n + 1):
        assert c.basic_poincare_pairing(r).nondegenerate
    assert c.pairing_report().passed


def test_heisenberg_pairing_matrix():
    pairing = contact("heisenberg3").basic_poincare_pairing(0)
    assert pairing.matrix.rows == ((1,),)


@pytest.mark.parametrize("name, expected", [("heisenberg3", 0), ("kt_contact5", 0), ("bw_torus4", 1)])
def test_contact_and_transverse_s_agree(name, expected):
    c = contact(name)
    assert c.contact_lefschetz().max_s == expected
    assert c.contact_transverse_check().passed


@pytest.mark.parametrize("name", CONTACT_SAMPLE)
def test_contact_checks_pass(name):
    c = contact(name)
    for report in (c.primitive_restriction_check(), c.contact_zero_lefschetz_check(), c.cup_vanishing_check(), c.cup_length_bound_check()):
        assert report.passed, (report.checker, report.details.get("failures"))


def test_lef_map_on_heisenberg():
    c = contact("heisenberg3")
    m = c.model
    one = c.coh.de_rham_cohomology(0).class_of(m.parse("1"))
    result = c.lef_map(0, one)
    assert result.tag == MAP_TAG
    assert not result.value.is_zero()
    assert result.value.degree == 3
    e1 = c.coh.de_rham_cohomology(1).class_of(m.parse("e1"))
    lef = c.lef_map(1, e1)
    assert lef.tag == MAP_TAG
    assert lef.value == c.coh.de_rham_cohomology(2).class_of(m.parse("e3^e1"))


def test_lef_map_needs_de_rham_class():
    c = contact("heisenberg3")
    basic = c.coh.basic_cohomology(1).class_of(c.model.parse("e1"))
    with pytest.raises(ContactError):
        c.lef_map(1, basic)


def test_contact_features_need_eta():
    with pytest.raises(ContactError):
        ContactModule(zoo("kodaira_thurston")).long_exact_sequence()


def test_cup_length_of_heisenberg():
    report = cup_length(get_model("heisenberg3"), get_cohomology("heisenberg3"))
    assert report.length == 2
    assert "∪" in report.witness
    bound = contact("heisenberg3").cup_length_bound_check()
    assert bound.details["cup_length"] == bound.details["bound"] == 2


def test_cup_length_of_torus():
    assert cup_length(zoo("torus4")).length == 4


def test_sasakian_flags():
    kt5 = contact("kt_contact5").sasakian_obstructions()
    assert kt5.details["flags"]["odd_betti"] == [1]
    assert kt5.details["no_sasakian_structure"]
    heis = contact("heisenberg3").sasakian_obstructions()
    assert not heis.details["no_sasakian_structure"]
    assert contact("bw_torus4").sasakian_obstructions().details["flags"]["odd_betti"] == []


@pytest.mark.parametrize("base, s, expected", [
    ("torus2", 0, 2),
    ("kodaira_thurston", 0, 3),
    ("torus4", 1, 5),
])
def test_gysin_bookkeeping(base, s, expected):
    report = gysin_bookkeeping(zoo(base), s)
    assert report.passed, report.details.get("failures")
    assert report.details["formula_applies"]
    assert report.details["b_total"] == report.details["formula_value"] == expected


def test_gysin_flags_odd_betti_on_kodaira_thurston():
    assert gysin_bookkeeping(zoo("kodaira_thurston"), 0).details["odd_betti_obstruction"]


@pytest.mark.parametrize("base", ["torus2", "torus4", "kodaira_thurston"])
def test_boothby_wang_lefschetz_matches_base(base):
    assert boothby_wang_lefschetz_check(zoo(base)).passed


def test_boothby_wang_rejects_foliated_base():
    with pytest.raises(ContactError):
        boothby_wang_lefschetz_check(zoo("heisenberg3"))
